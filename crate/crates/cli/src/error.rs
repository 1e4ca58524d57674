use serde_json::{json, Map, Value};

use livsic_core::Error;

/// An invalid-input failure, reported as JSON on stderr with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub variant: String,
    pub message: String,
    pub fields: Map<String, Value>,
    pub pointer: Option<String>,
}

impl CliError {
    pub fn new(variant: &str, message: impl Into<String>) -> Self {
        CliError { variant: variant.into(), message: message.into(), fields: Map::new(), pointer: None }
    }

    /// A malformed document; `pointer` is a JSON pointer into it.
    pub fn parse(message: impl Into<String>, pointer: &str) -> Self {
        CliError::new("ParseError", message).at(pointer)
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new("UsageError", message)
    }

    pub fn io(path: &str, err: &std::io::Error) -> Self {
        let mut e = CliError::new("IoError", format!("{path}: {err}"));
        e.fields.insert("path".into(), json!(path));
        e
    }

    pub fn core(err: &Error) -> Self {
        let mut fields = Map::new();
        let mut put = |k: &str, v: Value| {
            fields.insert(k.into(), v);
        };
        let variant = match err {
            Error::BadShape(_) => "BadShape",
            Error::DeadSymbol { symbol, line } => {
                put("symbol", json!(symbol));
                put("line", json!(line));
                "DeadSymbol"
            }
            Error::NotIrreducible { from, to } => {
                put("from", json!(from));
                put("to", json!(to));
                "NotIrreducible"
            }
            Error::RangeTooLarge { what, requested, cap } => {
                put("what", json!(what));
                put("requested", json!(requested));
                put("cap", json!(cap));
                "RangeTooLarge"
            }
            Error::InadmissibleWord(w) => {
                put("word", json!(w.to_string()));
                "InadmissibleWord"
            }
            Error::NotAGroup { reason, witness } => {
                put("reason", json!(reason));
                put("witness", json!(witness));
                "NotAGroup"
            }
            Error::ClosureTooLarge { cap } => {
                put("cap", json!(cap));
                "ClosureTooLarge"
            }
            Error::InfiniteGroup => "InfiniteGroup",
            Error::FiniteGroup => "FiniteGroup",
            Error::DimensionMismatch { expected, found } => {
                put("expected", json!(expected));
                put("found", json!(found));
                "DimensionMismatch"
            }
            Error::UnknownElement(name) => {
                put("element", json!(name));
                "UnknownElement"
            }
            Error::CocycleMismatch(_) => "CocycleMismatch",
            Error::NotStronglyConnected { from, to } => {
                put("from", json!(from));
                put("to", json!(to));
                "NotStronglyConnected"
            }
            Error::TorsionAlpha => "TorsionAlpha",
            Error::SingularMatrix(at) => {
                put("at", json!(at));
                "SingularMatrix"
            }
            Error::AlgebraNotClosed { i, j, residual } => {
                put("i", json!(i));
                put("j", json!(j));
                put("residual", json!(residual));
                "AlgebraNotClosed"
            }
            Error::CentralityImpossible(_) => "CentralityImpossible",
            Error::NotAHomomorphism(_) => "NotAHomomorphism",
            Error::StateSpaceTooLarge { states, cap } => {
                put("states", json!(states));
                put("cap", json!(cap));
                "StateSpaceTooLarge"
            }
        };
        CliError { variant: variant.into(), message: err.to_string(), fields, pointer: None }
    }

    /// Sets the pointer unless a more precise one is already present.
    pub fn at(mut self, pointer: &str) -> Self {
        if self.pointer.is_none() {
            self.pointer = Some(pointer.into());
        }
        self
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("error".into(), json!(self.variant));
        obj.insert("message".into(), json!(self.message));
        if !self.fields.is_empty() {
            obj.insert("fields".into(), Value::Object(self.fields.clone()));
        }
        if let Some(p) = &self.pointer {
            obj.insert("pointer".into(), json!(p));
        }
        Value::Object(obj)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::core(&e)
    }
}
