#![no_main]

use gvc_core::expr::parse_exponents;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(alpha) = parse_exponents(text) {
        let printed: Vec<String> = alpha.as_slice().iter().map(u32::to_string).collect();
        assert_eq!(parse_exponents(&printed.join(",")), Ok(alpha));
    }
});
