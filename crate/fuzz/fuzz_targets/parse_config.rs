#![no_main]

use gvc_core::lab::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

// Parsing and validation only; running an experiment can be arbitrarily slow.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = ExperimentConfig::from_json(text);
});
