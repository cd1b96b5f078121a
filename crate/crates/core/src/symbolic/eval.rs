use std::sync::Arc;

use crate::scalar::{ExtField, Fp};

/// Minimum field size used for random substitution.
pub const MIN_EVAL_ORDER: u64 = 1 << 15;

/// Field in which randomized routines sample: the instance prime field when it
/// is large, otherwise an extension of it.
#[derive(Clone, Debug)]
pub enum EvalField {
    Prime(Fp),
    Ext(Arc<ExtField>),
}

impl EvalField {
    pub fn for_prime(field: Fp) -> EvalField {
        EvalField::with_min_order(field, MIN_EVAL_ORDER)
    }

    pub fn with_min_order(field: Fp, min_order: u64) -> EvalField {
        if field.p() >= min_order {
            EvalField::Prime(field)
        } else {
            EvalField::Ext(ExtField::with_min_order(field.p(), min_order))
        }
    }

    pub fn order(&self) -> u64 {
        match self {
            EvalField::Prime(f) => f.p(),
            EvalField::Ext(e) => crate::scalar::Field::order(&**e),
        }
    }
}

/// Run a generic body with `$f: &impl Field` bound to the concrete field.
macro_rules! with_eval_field {
    ($ef:expr, |$f:ident| $body:expr) => {
        match $ef {
            $crate::symbolic::EvalField::Prime(ff) => {
                let $f = ff;
                $body
            }
            $crate::symbolic::EvalField::Ext(ff) => {
                let $f: &$crate::scalar::ExtField = &**ff;
                $body
            }
        }
    };
}
pub(crate) use with_eval_field;
