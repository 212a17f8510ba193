use super::ast::IdentityRecord;
use super::parser::parse;

pub const REGISTRY_SOURCE: &str = include_str!("registry.qid");

/// The built-in identities, in source order.
pub fn builtin_registry() -> Vec<IdentityRecord> {
    parse(REGISTRY_SOURCE).expect("built-in registry parses")
}

pub fn lookup(name: &str) -> Option<IdentityRecord> {
    builtin_registry().into_iter().find(|r| r.name == name)
}
