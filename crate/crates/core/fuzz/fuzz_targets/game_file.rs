#![no_main]
use libfuzzer_sys::fuzz_target;
use qgame::gamefile::parse_game_file;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_game_file(src) {
        assert!(file.game.a.iter().chain(&file.game.b).flatten().all(|v| v.is_finite()));
        if let Some(s) = file.setting {
            assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&s.gamma()));
        }
        assert!(file.search.grid.iter().all(|&n| n > 0));
        assert!(file.search.max_iter > 0);
    }
});
