#![no_main]

use gvc_core::expr::{parse, ParseContext};
use gvc_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [
        FieldSpec::Rationals,
        FieldSpec::GaussianRationals,
        FieldSpec::prime_field(7).unwrap(),
    ] {
        let ctx = ParseContext::extended(field, 3, 2);
        if let Ok(value) = parse(text, &ctx) {
            let printed = value.format(&ctx.layout());
            let again = parse(&printed, &ctx).expect("formatted output parses");
            // the printed form may be typed differently only when it is a constant
            assert_eq!(again.format(&ctx.layout()), printed);
        }
    }
});
