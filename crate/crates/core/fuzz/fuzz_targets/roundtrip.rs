#![no_main]

use libfuzzer_sys::fuzz_target;
use qsverify::identity::{parse, parse_expr};

// Printing a parsed AST and parsing it again must give the same AST.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse(text) {
        let printed: String = records.iter().map(|r| format!("{r}\n")).collect();
        assert_eq!(parse(&printed).expect("printed records reparse"), records);
    }
    if let Ok(expr) = parse_expr(text) {
        assert_eq!(parse_expr(&expr.to_string()).expect("printed expression reparses"), expr);
    }
});
