//! Canonical printing and parse errors with byte positions.

use deltapoly::algebra::RingContext;
use deltapoly::lang::parse;

fn main() {
    let ring = RingContext::new(2, ["y", "z"]).unwrap();
    for text in [
        "z*d1(y)^2 + y^4 - 1",
        "2*z*d1^2(y) + d1(z)*d1(y) + 4*y^3",
        "d2(d1(y)) - d1(d2(y))",
        "(y + z)^3 - 1/3*y*z",
        "d1^2(y*z)",
    ] {
        let f = parse(text, &ring).unwrap();
        let again = parse(&f.to_string(), &ring).unwrap();
        assert_eq!(f, again);
        println!("{text:<40} => {f}");
    }
    for bad in ["y + * z", "d3(y)", "w^2", "y^-1"] {
        println!("{bad:<40} => {}", parse(bad, &ring).unwrap_err());
    }
}
