#![no_main]

use libfuzzer_sys::fuzz_target;
use uavtour::io::parse_roads;

fuzz_target!(|data: &str| {
    let _ = parse_roads(data);
});
