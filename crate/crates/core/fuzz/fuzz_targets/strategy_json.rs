#![no_main]
use libfuzzer_sys::fuzz_target;
use qgame::{DiscreteMixedStrategy, Su2Element};

fuzz_target!(|data: &[u8]| {
    if let Ok(u) = serde_json::from_slice::<Su2Element>(data) {
        let n: f64 = u.to_vector().iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-12);
        let again: Su2Element = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(again.to_vector(), u.to_vector());
    }
    if let Ok(mu) = serde_json::from_slice::<DiscreteMixedStrategy>(data) {
        assert!(!mu.is_empty());
        assert!((mu.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
});
