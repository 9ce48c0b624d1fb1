//! Shipped example presentations.

use thiserror::Error;

use crate::dga::DgaPresentation;

/// `(name, file contents)` for every fixture under `fixtures/`.
pub const FIXTURES: &[(&str, &str)] = &[
    ("A", include_str!("../fixtures/A.dga")),
    ("A_prime", include_str!("../fixtures/A_prime.dga")),
    ("A_half_strict", include_str!("../fixtures/A_half_strict.dga")),
    ("A_alt_grading", include_str!("../fixtures/A_alt_grading.dga")),
    ("A_prime_alt_grading", include_str!("../fixtures/A_prime_alt_grading.dga")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown fixture `{0}`")]
pub struct UnknownFixture(pub String);

pub fn fixture_text(name: &str) -> Result<&'static str, UnknownFixture> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| UnknownFixture(name.to_string()))
}

pub fn fixture(name: &str) -> Result<DgaPresentation, UnknownFixture> {
    let text = fixture_text(name)?;
    Ok(text.parse().expect("shipped fixtures parse"))
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}
