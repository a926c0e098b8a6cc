#![no_main]

use digitsum::parse::parse_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((lo, hi)) = parse_range(s) {
        assert!(lo <= hi);
        assert_eq!(parse_range(&format!("{lo}..={hi}")).unwrap(), (lo, hi));
    }
});
