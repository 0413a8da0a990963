#![no_main]

use libfuzzer_sys::fuzz_target;
use uavtour::config::parse_config;

fuzz_target!(|data: &str| {
    if let Ok(config) = parse_config(data) {
        // Anything accepted must survive a write/read cycle.
        assert_eq!(parse_config(&config.to_toml()).unwrap(), config);
    }
});
