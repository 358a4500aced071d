#![no_main]

use libfuzzer_sys::fuzz_target;

use finchain::io::FunctionSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = FunctionSpec::parse(text) else {
        return;
    };
    // Whatever parsed must evaluate without panicking and stay consistent
    // with its validation.
    for state in 0..8 {
        let value = spec.eval(state);
        assert!(value.is_finite());
    }
    match spec {
        FunctionSpec::Identity => assert!(spec.validate(1).is_ok()),
        FunctionSpec::Indicator(state) => {
            assert!(spec.validate(state + 1).is_ok());
            assert!(spec.validate(state).is_err());
        }
    }
});
