//! Fixtures shared by the benchmarks.

use trinoperm_core::{FieldCtx, FqElem, QuadExtCtx};

/// F_{q^2} over F_q for `q = p^m`.
pub fn tower(p: u32, m: u32) -> QuadExtCtx {
    QuadExtCtx::build(p, m).expect("benchmark field within bounds")
}

/// A fixed nonzero pair `(a, b)` spread across the field.
pub fn sample_pair(f: &FieldCtx) -> (FqElem, FqElem) {
    let q = f.q() as u64;
    let a = f.elem((q / 3).max(1)).expect("in range");
    let b = f.elem((2 * q / 3).max(1)).expect("in range");
    (a, b)
}
