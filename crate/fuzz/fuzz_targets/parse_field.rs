#![no_main]

use gvc_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(field) = text.parse::<FieldSpec>() {
        assert_eq!(field.to_string().parse::<FieldSpec>().ok(), Some(field));
    }
});
