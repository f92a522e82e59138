#![no_main]

use fnilpotent::sweep::{export, ExportFormat, SweepReport};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = SweepReport::from_json(data) {
        let json = export(&report, ExportFormat::Json).expect("report serializes");
        let again = SweepReport::from_json(&json).expect("exported report parses");
        assert_eq!(again, report);
        let _ = export(&report, ExportFormat::Csv);
    }
});
