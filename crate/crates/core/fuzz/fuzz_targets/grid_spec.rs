#![no_main]

use libfuzzer_sys::fuzz_target;

use finchain::io::parse_grid;
use finchain::targets::{ising_weights, IsingModel};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((width, height)) = parse_grid(text) else {
        return;
    };
    assert!(width > 0 && height > 0);
    let Ok(model) = IsingModel::new(width, height, 0.5) else {
        return;
    };
    // Construction succeeded: the 20-site cap bounds the table size.
    if model.sites() <= 9 {
        let weights = ising_weights(&model);
        assert_eq!(weights.len(), 1usize << model.sites());
        let spins = vec![1i8; model.sites()];
        let p = model.site_conditional_plus(&spins, 0).expect("site 0 exists");
        assert!((0.0..=1.0).contains(&p));
    }
});
