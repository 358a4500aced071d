#![no_main]

use libfuzzer_sys::fuzz_target;

use finchain::io::{kernel_to_json, parse_kernel_json};
use finchain::stationary::solve_stationary;
use finchain::structure::{analyze, check_irreducible};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(kernel) = parse_kernel_json(text) else {
        return;
    };
    // Accepted kernels must round-trip bit for bit.
    let reparsed = parse_kernel_json(&kernel_to_json(&kernel)).expect("round trip parses");
    for z in 0..kernel.size() {
        for s in 0..kernel.size() {
            assert_eq!(reparsed.entry(z, s).to_bits(), kernel.entry(z, s).to_bits());
        }
    }
    // Downstream analysis must not panic on any accepted kernel; keep the
    // expensive paths to small state spaces.
    if kernel.size() <= 32 {
        let report = analyze(&kernel);
        assert_eq!(report.irreducible, check_irreducible(&kernel));
        if report.irreducible {
            let result = solve_stationary(&kernel).expect("irreducible kernels solve");
            assert!(result.residual <= 1e-10);
        }
    }
});
