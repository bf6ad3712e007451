#![no_main]
use libfuzzer_sys::fuzz_target;
use qgame::strategy_spec::parse_angle;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_angle(s) {
            assert!(v.is_finite(), "{s:?} -> {v}");
        }
    }
});
