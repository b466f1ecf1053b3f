#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Spec parsing enforces family ranges, parity, and topology bounds;
    // whatever validates must evaluate without panicking.
    if let Ok(spec) = asdindex::input::parse_orbifold_spec(data) {
        let _ = asdindex::indexcore::orbifold_index(&spec);
        let _ = asdindex::invariants::signature_orbifold(&spec);
    }
});
