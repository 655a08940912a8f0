//! The two abstractions the estimators are written against: an F₂-action on
//! some point type, and a function that can be evaluated on those points.

use crate::error::Result;
use crate::fgroup::{Letter, ReducedWord};
use crate::rational::{to_f64, Q};

pub trait Dynamics: Sync {
    type Point: Clone + Send + Sync;

    /// Replaces `p` with `T_s p`.
    fn shift(&self, p: &mut Self::Point, s: Letter) -> Result<()>;

    /// `T_w p`, so the leftmost letter of `w` acts last and `T_g T_h = T_{gh}`.
    fn apply_word(&self, p: &Self::Point, w: &ReducedWord) -> Result<Self::Point> {
        let mut q = p.clone();
        for &l in w.letters().iter().rev() {
            self.shift(&mut q, l)?;
        }
        Ok(q)
    }
}

pub trait PointFunction<P>: Sync {
    fn exact(&self, p: &P) -> Q;

    fn approx(&self, p: &P) -> f64 {
        to_f64(&self.exact(p))
    }

    /// Lower and upper bounds on the function's values.
    fn bounds(&self) -> (f64, f64);
}

/// A constant function on any point type.
#[derive(Clone, Debug)]
pub struct Constant(pub Q);

impl<P> PointFunction<P> for Constant {
    fn exact(&self, _: &P) -> Q {
        self.0.clone()
    }

    fn bounds(&self) -> (f64, f64) {
        let c = to_f64(&self.0);
        (c, c)
    }
}
