#![no_main]

use libfuzzer_sys::fuzz_target;
use losmimo_cli::config::{SnrGrid, SnrUnit, MAX_LIST_LEN};

fuzz_target!(|data: &[u8]| {
    let Some((&flag, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let unit = if flag & 1 == 0 { SnrUnit::Linear } else { SnrUnit::Db };
    if let Ok(grid) = SnrGrid::parse(text, unit) {
        assert!(!grid.rho.is_empty() && grid.rho.len() <= MAX_LIST_LEN);
        assert!(grid.rho.iter().all(|r| r.is_finite() && *r >= 0.0));
        assert!(grid.rho.windows(2).all(|w| w[0] < w[1]));
    }
});
