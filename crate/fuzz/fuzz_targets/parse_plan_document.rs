#![no_main]

use libfuzzer_sys::fuzz_target;
use uavtour::io::parse_plan_document;
use uavtour::planner::plan_stats;

fuzz_target!(|data: &str| {
    if let Ok(doc) = parse_plan_document(data) {
        let _ = plan_stats(&doc.plan);
        let _ = doc.points();
    }
});
