#![no_main]
use libfuzzer_sys::fuzz_target;
use qgame::strategy_spec::parse_strategy;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(u) = parse_strategy(s) {
            let n: f64 = u.to_vector().iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12, "{s:?} gave norm^2 {n}");
        }
    }
});
