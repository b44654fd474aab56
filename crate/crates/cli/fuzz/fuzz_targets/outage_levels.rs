#![no_main]

use libfuzzer_sys::fuzz_target;
use losmimo_cli::config::parse_levels;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(levels) = parse_levels(text) {
        assert!(levels.iter().all(|q| *q > 0.0 && *q < 1.0));
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
    }
});
