use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{Ident, Literal, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauReason {
    Validate,
    Negotiate,
    Collect,
}

/// Action alphabet of both calculi.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransitionLabel {
    Invoke { name: Ident, params: Params },
    Collect { slot: Ident, value: Literal },
    Call { name: Ident, params: Params },
    Tau { reason: TauReason },
    Approval { tool: Ident, confirm: bool },
    Requires { token: Ident },
    Execute { name: Ident },
    Result { output: Literal },
    Error { error_type: Ident, message: String },
    Read { uri: String },
    List { filter: String },
    Detail { name: Ident },
}

impl TransitionLabel {
    pub fn is_tau(&self) -> bool {
        matches!(self, TransitionLabel::Tau { .. })
    }
}

fn write_params(f: &mut fmt::Formatter<'_>, params: &Params) -> fmt::Result {
    f.write_str("{")?;
    for (i, (k, v)) in params.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{k}: {v}")?;
    }
    f.write_str("}")
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Invoke { name, params } => {
                write!(f, "invoke({name}, ")?;
                write_params(f, params)?;
                f.write_str(")")
            }
            TransitionLabel::Collect { slot, value } => write!(f, "collect({slot}, {value})"),
            TransitionLabel::Call { name, params } => {
                write!(f, "call({name}, ")?;
                write_params(f, params)?;
                f.write_str(")")
            }
            TransitionLabel::Tau { reason } => {
                let r = match reason {
                    TauReason::Validate => "validate",
                    TauReason::Negotiate => "negotiate",
                    TauReason::Collect => "collect",
                };
                write!(f, "tau[{r}]")
            }
            TransitionLabel::Approval { tool, confirm } => write!(f, "approval({tool}, {confirm})"),
            TransitionLabel::Requires { token } => write!(f, "requires({token})"),
            TransitionLabel::Execute { name } => write!(f, "execute({name})"),
            TransitionLabel::Result { output } => write!(f, "result({output})"),
            TransitionLabel::Error { error_type, message } => write!(f, "error({error_type}, {message:?})"),
            TransitionLabel::Read { uri } => write!(f, "read({uri})"),
            TransitionLabel::List { filter } => write!(f, "list({filter:?})"),
            TransitionLabel::Detail { name } => write!(f, "detail({name})"),
        }
    }
}
