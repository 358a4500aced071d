#![no_main]

use libfuzzer_sys::fuzz_target;

use finchain::io::{distribution_to_json, parse_distribution_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(dist) = parse_distribution_json(text) else {
        return;
    };
    assert!(dist.mass().iter().all(|&m| m >= 0.0 && m.is_finite()));
    let reparsed = parse_distribution_json(&distribution_to_json(&dist)).expect("round trip");
    assert_eq!(reparsed.mass(), dist.mass());
});
