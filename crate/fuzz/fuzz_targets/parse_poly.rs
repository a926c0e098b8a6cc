#![no_main]

use digitsum::parse::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_poly(s) else { return };
    if p.coeffs().is_empty() {
        return;
    }
    let text: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
    assert_eq!(parse_poly(&text.join(",")).unwrap(), p);
});
