//! Bundled scene library, embedded at compile time so `courantlab` works
//! without any files on disk.

pub const FIXTURES: &[(&str, &str)] = &[
    ("flatq", include_str!("../fixtures/flatq.json")),
    ("c2std", include_str!("../fixtures/c2std.json")),
    ("hpt", include_str!("../fixtures/hpt.json")),
    ("flatq-b", include_str!("../fixtures/flatq-b.json")),
    ("nonint", include_str!("../fixtures/nonint.json")),
    ("hp-kahler", include_str!("../fixtures/hp-kahler.json")),
    ("twist-c2", include_str!("../fixtures/twist-c2.json")),
    ("twist-c3-neg", include_str!("../fixtures/twist-c3-neg.json")),
];

/// Looks up a bundled scene by name; `flatq` and `flatq.json` both work.
pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    FIXTURES.iter().find(|(n, _)| *n == stem).map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}
