#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Parsing plus the downstream classify pipeline must never panic on
    // arbitrary bytes: malformed JSON, non-unit quaternions, non-orthogonal
    // matrices, reflections, and generators whose closure hits the internal
    // cap all have to surface as errors.
    if let Ok(group) = asdindex::input::parse_generator_file(data) {
        let _ = asdindex::conjclass::classify_action(&group);
    }
});
