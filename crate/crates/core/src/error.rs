use thiserror::Error;

/// A configuration field outside its admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("invalid configuration: {field} = {value} ({requirement})")]
pub struct ConfigError {
    pub field: &'static str,
    pub value: f64,
    pub requirement: &'static str,
}

pub(crate) fn require(
    ok: bool,
    field: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError {
            field,
            value,
            requirement,
        })
    }
}
