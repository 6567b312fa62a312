use super::parser::parse_suite_named;
use super::Suite;

/// `(name, source)` of every builtin suite, sorted by name.
pub const BUILTIN_SOURCES: &[(&str, &str)] = &[
    ("aw-embedding", include_str!("../../suites/aw-embedding.qsuite")),
    ("aw-params-centrality", include_str!("../../suites/aw-params-centrality.qsuite")),
    ("classical-limit", include_str!("../../suites/classical-limit.qsuite")),
    ("commutant", include_str!("../../suites/commutant.qsuite")),
    ("howe-commutation", include_str!("../../suites/howe-commutation.qsuite")),
    ("o3-cartesian", include_str!("../../suites/o3-cartesian.qsuite")),
    ("oq-n-generic", include_str!("../../suites/oq-n-generic.qsuite")),
    ("oq4-casimirs", include_str!("../../suites/oq4-casimirs.qsuite")),
    ("oq4-relations", include_str!("../../suites/oq4-relations.qsuite")),
    ("proof-lemmas", include_str!("../../suites/proof-lemmas.qsuite")),
    ("qhiggs-proposition", include_str!("../../suites/qhiggs-proposition.qsuite")),
    ("qosc", include_str!("../../suites/qosc.qsuite")),
    ("script-K-consistency", include_str!("../../suites/script-K-consistency.qsuite")),
    ("su11-metaplectic", include_str!("../../suites/su11-metaplectic.qsuite")),
    ("su11-tilde", include_str!("../../suites/su11-tilde.qsuite")),
];

/// Parses every builtin suite.
///
/// # Panics
/// If an embedded suite fails to parse, which the test suite rules out.
pub fn builtin_suites() -> Vec<Suite> {
    BUILTIN_SOURCES
        .iter()
        .map(|(name, src)| {
            parse_suite_named(src, name).unwrap_or_else(|e| panic!("builtin suite {name}: {e}"))
        })
        .collect()
}

pub fn builtin_suite(name: &str) -> Option<Suite> {
    BUILTIN_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, src)| {
            parse_suite_named(src, n).unwrap_or_else(|e| panic!("builtin suite {n}: {e}"))
        })
}
