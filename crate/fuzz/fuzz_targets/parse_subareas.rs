#![no_main]

use libfuzzer_sys::fuzz_target;
use uavtour::geometry::{PlanarPoint, Projection, Subarea};
use uavtour::io::parse_subareas;

fuzz_target!(|data: &str| {
    let Ok(areas) = parse_subareas(data) else {
        return;
    };
    // Polygon validation runs on whatever the parser accepts.
    let Some(projection) = Projection::centered_on(&areas.iter().flat_map(|a| a.ring.clone()).collect::<Vec<_>>()) else {
        return;
    };
    for a in areas {
        let ring: Vec<PlanarPoint> = a.ring.iter().map(|g| projection.forward(*g)).collect();
        let _ = Subarea::new(a.id, ring, a.h_max_m);
    }
});
