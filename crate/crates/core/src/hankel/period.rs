use serde::Serialize;

/// Smallest `(preperiod, period)` in lexicographic order such that
/// `s[i] = s[i + period]` for every `i >= preperiod` and the repetition is
/// seen at least twice, `preperiod + 2·period <= s.len()`.
pub fn detect_period<T: PartialEq>(s: &[T]) -> Option<(usize, usize)> {
    let n = s.len();
    let mut best: Option<(usize, usize)> = None;
    for p in 1..=n / 2 {
        // preperiod forced by the last mismatch at lag p
        let pre = (0..n - p).rev().find(|&i| s[i] != s[i + p]).map_or(0, |i| i + 1);
        if pre + 2 * p <= n && best.is_none_or(|b| (pre, p) < b) {
            best = Some((pre, p));
        }
    }
    best
}

/// Ultimate periodicity observed in a reduced table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicityEvidence {
    pub modulus: u64,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    /// Number of entries over which the repetition was checked.
    pub verified_length: usize,
    pub horizon: usize,
}

impl PeriodicityEvidence {
    pub fn scan<T: PartialEq>(modulus: u64, s: &[T]) -> Self {
        match detect_period(s) {
            Some((pre, p)) => PeriodicityEvidence {
                modulus,
                preperiod: Some(pre),
                period: Some(p),
                verified_length: s.len() - pre,
                horizon: s.len(),
            },
            None => PeriodicityEvidence {
                modulus,
                preperiod: None,
                period: None,
                verified_length: 0,
                horizon: s.len(),
            },
        }
    }

    pub fn found(&self) -> bool {
        self.period.is_some()
    }
}
