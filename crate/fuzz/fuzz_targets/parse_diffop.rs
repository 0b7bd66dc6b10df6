#![no_main]

use gvc_core::expr::{format_diffop, parse_diffop, ParseContext};
use gvc_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [
        FieldSpec::Rationals,
        FieldSpec::GaussianRationals,
        FieldSpec::prime_field(5).unwrap(),
    ] {
        let ctx = ParseContext::new(field, 3);
        if let Ok(value) = parse_diffop(text, &ctx) {
            let printed = format_diffop(&value, &ctx.layout());
            assert_eq!(
                parse_diffop(&printed, &ctx).as_ref(),
                Ok(&value),
                "{printed}"
            );
        }
    }
});
