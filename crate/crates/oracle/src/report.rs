use std::fmt;

/// Outcome of comparing an oracle against the code under test.
#[derive(Clone, Debug)]
pub struct OracleReport<T> {
    pub case_id: String,
    pub oracle: Vec<T>,
    pub subject: Vec<T>,
    pub matched: bool,
    /// Index of the first differing element, or the shorter length when one
    /// output is a prefix of the other.
    pub first_divergence: Option<usize>,
}

impl<T: PartialEq + Clone> OracleReport<T> {
    pub fn compare(case_id: impl Into<String>, oracle: Vec<T>, subject: Vec<T>) -> Self {
        let first_divergence = oracle
            .iter()
            .zip(&subject)
            .position(|(a, b)| a != b)
            .or_else(|| (oracle.len() != subject.len()).then(|| oracle.len().min(subject.len())));
        OracleReport { case_id: case_id.into(), matched: first_divergence.is_none(), oracle, subject, first_divergence }
    }
}

impl<T: Ord + Clone> OracleReport<T> {
    /// Compare after sorting both sides.
    pub fn compare_sorted(case_id: impl Into<String>, mut oracle: Vec<T>, mut subject: Vec<T>) -> Self {
        oracle.sort();
        subject.sort();
        Self::compare(case_id, oracle, subject)
    }
}

impl<T: fmt::Debug> fmt::Display for OracleReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_divergence {
            None => write!(f, "[{}] match ({} items)", self.case_id, self.oracle.len()),
            Some(i) => write!(
                f,
                "[{}] MISMATCH at {}: oracle={:?} subject={:?}",
                self.case_id,
                i,
                self.oracle.get(i),
                self.subject.get(i)
            ),
        }
    }
}
