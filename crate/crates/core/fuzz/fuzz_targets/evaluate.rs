#![no_main]

use libfuzzer_sys::fuzz_target;
use qsverify::identity::{evaluate, parse_expr};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(expr) = parse_expr(text) {
        let e = evaluate(&expr, 12);
        assert!(e.denominator > 0.into());
    }
});
