#![no_main]

use fnilpotent::snc::SncConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = SncConfig::from_json(text) {
        let json = config.to_json();
        let again = SncConfig::from_json(&json).expect("serialized config parses");
        assert_eq!(again.to_json(), json);
        assert_eq!(again.graph().betti1(), config.graph().betti1());
    }
});
