//! Conversion of k-domain decisions back to the transmitted four dimensions.

use crate::channel::{invert_stokes_map, recover_gamma, stokes_map, ChannelMatrix};
use crate::constellation::{wrap_angle, FourDSymbol};
use crate::error::{Error, Result};
use crate::frontend::DVector;

/// `(|k_x|^2, |k_y|^2, 2|k_x||k_y| cos theta', 2|k_x||k_y| sin theta')` of a d-vector.
pub fn k_quadruple(d: &DVector) -> [f64; 4] {
    [
        d.c1 * d.c1,
        d.c2.norm_sqr(),
        2.0 * d.c1 * d.c2.re,
        2.0 * d.c1 * d.c2.im,
    ]
}

/// Maps decided `d_k[0..=n]` (slot 0 is the pilot) to e-domain symbols for
/// slots `1..=n`: the intensity map is inverted for `(|e_x|, |e_y|, theta)`
/// and `gamma` is solved from the fourth-dimension relation.
pub fn decisions_to_e_domain(decided: &[DVector], h: &ChannelMatrix) -> Result<Vec<FourDSymbol>> {
    if decided.len() < 2 {
        return Err(Error::EmptyBlock);
    }
    let m = stokes_map(h);
    let mut prev = invert_stokes_map(&m, &k_quadruple(&decided[0]))?;
    let mut out = Vec::with_capacity(decided.len() - 1);
    for d in &decided[1..] {
        let cur = invert_stokes_map(&m, &k_quadruple(d))?;
        let gamma = recover_gamma(h, &cur, &prev, d.gamma(), (d.c1, d.prev_mag_y()))?;
        out.push(FourDSymbol {
            mag_x: cur.mag_x,
            mag_y: cur.mag_y,
            theta: wrap_angle(cur.theta),
            gamma,
        });
        prev = cur;
    }
    Ok(out)
}
