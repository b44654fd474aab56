#![no_main]

use libfuzzer_sys::fuzz_target;
use losmimo_cli::config::{RunConfig, Settings};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(settings) = Settings::from_config_text(text) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_settings(&settings) {
        assert!(cfg.n_r >= 1 && cfg.n_t >= 1);
        assert!(cfg.samples >= 2);
        assert!(!cfg.snr.rho.is_empty());
        assert!(cfg.snr.rho.windows(2).all(|w| w[0] < w[1]));
        assert!(cfg.outage.iter().all(|q| *q > 0.0 && *q < 1.0));
    }
});
