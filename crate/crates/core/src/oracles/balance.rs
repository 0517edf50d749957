use crate::automaton::BracketPair;

/// Balanced iff, for every pair separately, no prefix has more closers than
/// openers and the whole string has equally many. Symbols outside every
/// pair are ignored.
pub fn counter_balanced<S: AsRef<str>>(pairs: &[BracketPair], input: &[S]) -> bool {
    pairs.iter().all(|p| {
        (0..=input.len()).all(|end| {
            let opens = input[..end].iter().filter(|s| s.as_ref() == p.open).count();
            let closes = input[..end].iter().filter(|s| s.as_ref() == p.close).count();
            closes <= opens && (end < input.len() || opens == closes)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes() {
        let p = [BracketPair::new("(", ")")];
        assert!(counter_balanced(&p, &["(", "x", ")"]));
        assert!(!counter_balanced(&p, &[")", "("]));
        assert!(!counter_balanced(&p, &["("]));
    }
}
