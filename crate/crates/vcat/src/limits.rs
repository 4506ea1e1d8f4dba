use std::sync::OnceLock;

/// Default cap on the number of candidates any single enumeration may visit.
pub const DEFAULT_MAX_ENUM: usize = 1_000_000;

/// Enumeration cap, read once from `VCAT_MAX_ENUM` and otherwise [`DEFAULT_MAX_ENUM`].
pub fn max_enum() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("VCAT_MAX_ENUM")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_ENUM)
    })
}
