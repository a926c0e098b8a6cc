#![no_main]

use digitsum::parse::parse_natural;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(n) = parse_natural(s) {
        assert_eq!(parse_natural(&n.to_string()).unwrap(), n);
    }
});
