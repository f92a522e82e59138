#![no_main]

use fnilpotent::sweep::IntegerModel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = IntegerModel::from_json(text) {
        let again = IntegerModel::from_json(&model.to_json()).expect("serialized model parses");
        assert_eq!(model, again);
    }
});
