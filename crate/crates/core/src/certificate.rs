use serde::Serialize;

/// Record of a passed check. Failed checks surface as `Error` values instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub check: String,
    pub detail: String,
}

impl Certificate {
    pub fn new(check: &str, detail: impl Into<String>) -> Self {
        Certificate {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}
