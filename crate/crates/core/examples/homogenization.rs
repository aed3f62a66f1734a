//! Homogenize, dehomogenize, and evaluate at the point at infinity.

use std::collections::BTreeMap;

use deltapoly::algebra::RingContext;
use deltapoly::homogenize::{dehomogenize, excludes_infinity, homogenize, is_delta_homogeneous};
use deltapoly::lang::parse;

fn main() {
    let ring = RingContext::new(1, ["y"]).unwrap();
    for text in ["y^2 + 1", "d1(y)", "d1(y) - y^2", "d1^2(y)*y + 5"] {
        let f = parse(text, &ring).unwrap();
        let h = homogenize(&f, &["y"], "y0").unwrap();
        let f_back = dehomogenize(&h.polynomial, "y0").unwrap();
        let homog = is_delta_homogeneous(&h.polynomial, &["y", "y0"], h.degree).unwrap();
        let at_inf = excludes_infinity(&h.polynomial, "y", "y0", &BTreeMap::new()).unwrap();
        println!("{text}");
        println!("  H = {} (degree {}, homogeneous: {homog})", h.polynomial, h.degree);
        println!("  H(y, 1) = {f_back}");
        println!("  H(1, 0) = {}", at_inf.value);
    }
}
