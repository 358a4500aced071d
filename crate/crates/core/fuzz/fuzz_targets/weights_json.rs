#![no_main]

use libfuzzer_sys::fuzz_target;

use finchain::io::{parse_weights_json, weights_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(weights) = parse_weights_json(text) else {
        return;
    };
    // Accepted weights always normalize into a valid distribution.
    let pi = weights.normalize().expect("weights normalize");
    assert_eq!(pi.mass().len(), weights.len());
    let reparsed = parse_weights_json(&weights_to_json(&weights)).expect("round trip");
    assert_eq!(reparsed.weights(), weights.weights());
});
