//! Closed-form Gramian of a first-order pair against Gauss-Legendre quadrature
//! of the defining integral.

use silverreach::gramian::closed_form_det;
use silverreach::{ellipse_area_paper, gramian_closed_form, gramian_quadrature, FirstOrderPair};

fn main() -> silverreach::Result<()> {
    for (a1, a2, b1, b2) in [(1.0, 2.0, 1.0, 1.0), (0.05, 9.5, -3.0, 0.4), (2.0, 2.001, 1.0, -1.0)] {
        let pair = FirstOrderPair::new(a1, a2, b1, b2)?;
        let w = gramian_closed_form(&pair)?;
        let q = gramian_quadrature(&pair, 1e-10)?;
        let area = ellipse_area_paper(&pair)?;
        println!("alpha = ({a1}, {a2}), beta = ({b1}, {b2})");
        println!("  closed     {:.12e} {:.12e} {:.12e}", w.w11, w.w12, w.w22);
        println!("  quadrature {:.12e} {:.12e} {:.12e}", q.w11, q.w12, q.w22);
        println!(
            "  area {:.15e}  sqrt(det W) {:.15e}",
            area.paper,
            closed_form_det(&pair)?.sqrt()
        );
    }
    Ok(())
}
