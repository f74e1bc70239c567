use qdeform_core::algebra::AlgebraName::*;
use qdeform_core::cohomology::*;

#[test]
fn probe() {
    let rep = h1_component(B4, 0, 6).unwrap();
    println!("B4 d=0 M=6: quotient {}", rep.quotient);
}
