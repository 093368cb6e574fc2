/// Suffix GitHub appends to bot account names.
pub const BOT_SUFFIX: &str = "[bot]";

/// True iff the account name ends with the exact `[bot]` suffix.
pub fn is_bot(dev: &str) -> bool {
    dev.ends_with(BOT_SUFFIX)
}
