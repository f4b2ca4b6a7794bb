//! Every recurrence image of a closed-form S_{l,m,n} equals the closed form
//! at the target order, exactly in the symbolic coefficients.

use std::collections::{BTreeSet, VecDeque};

use latsum::cylsum::{recur_symbolic, s_even_symbolic, s_zero_symbolic, Recurrence, SymbolicExpr};
use latsum::Error;

fn closed(l: u32, m: i32, n: u32) -> SymbolicExpr {
    if m == 0 {
        s_zero_symbolic(l, n).unwrap()
    } else {
        s_even_symbolic(l, m, n).unwrap()
    }
}

fn explore(m: i32, max_ln: u32) -> (usize, Vec<String>) {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([(0u32, 2u32)]);
    let mut checked = 0;
    let mut skipped = Vec::new();
    while let Some((l, n)) = queue.pop_front() {
        if !seen.insert((l, n)) {
            continue;
        }
        let src = closed(l, m, n);
        for op in Recurrence::ALL {
            let Ok((tl, tn)) = op.target(l, n) else { continue };
            if tl + tn > max_ln {
                continue;
            }
            match recur_symbolic(op, l, m, n, &src) {
                Ok(img) => {
                    assert_eq!(img, closed(tl, m, tn), "{op:?} from ({l},{m},{n})");
                    checked += 1;
                }
                Err(Error::Structural(_) | Error::Divergent(_)) => skipped.push(format!("{op:?}@({l},{n})")),
                Err(e) => panic!("{op:?} from ({l},{m},{n}): {e}"),
            }
            queue.push_back((tl, tn));
        }
    }
    (checked, skipped)
}

#[test]
fn closure_for_nonzero_m() {
    for m in [2, 4, 6, -4] {
        let (checked, skipped) = explore(m, 12);
        assert!(checked > 30, "m = {m}: only {checked} edges");
        assert!(skipped.is_empty(), "m = {m}: {skipped:?}");
    }
}

#[test]
fn closure_for_zero_m() {
    let (checked, skipped) = explore(0, 12);
    assert!(checked > 30, "{checked}");
    // Only the R4 steps into the σ₂⁽⁰⁾ boundary term are not available.
    assert!(skipped.iter().all(|s| s.starts_with("R4")), "{skipped:?}");
}
