#![no_main]

use gvc_core::expr::{parse_linear_factors, ParseContext};
use gvc_core::reduction::{build_extended_product, product_target};
use gvc_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let ctx = ParseContext::new(FieldSpec::Rationals, 3);
    if let Ok(forms) = parse_linear_factors(text, &ctx) {
        if forms.len() <= 4 {
            let (extended, ring) = build_extended_product(&forms).expect("nonzero forms");
            assert_eq!(
                ring.diffop_to_new(&extended).unwrap(),
                product_target(&ring).unwrap()
            );
        }
    }
});
