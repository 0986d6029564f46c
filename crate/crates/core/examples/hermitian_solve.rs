//! Factor a rank-deficient interference covariance and evaluate
//! `c^H R^-1 c` inside and outside its range.
//!
//! cargo run --example hermitian_solve

use ocfield::linalg::{
    cholesky, project_out, quadratic_form_inverse, ComplexVector, HermitianMatrix, C64,
};

fn main() {
    let a = ComplexVector::from_pairs(&[(1.0, 0.0), (0.5, -0.5), (0.0, 1.0)]);
    let b = ComplexVector::from_pairs(&[(0.0, 1.0), (1.0, 0.0), (-0.3, 0.2)]);
    let mut r = HermitianMatrix::zeros(3);
    r.add_rank_one(2.0, &a);
    r.add_rank_one(0.5, &b);

    match cholesky(&r) {
        Ok(_) => println!("unexpectedly full rank"),
        Err(e) => println!("rank {} of 3, first skipped pivot {}", e.rank, e.pivot),
    }
    let mut inside = a.clone();
    inside.axpy_sub(C64::new(-1.0, 0.0), &b);
    println!("in range:  {:.6}", quadratic_form_inverse(&inside, &r));
    println!("off range: {}", quadratic_form_inverse(&ComplexVector::basis(3, 0), &r));

    r.add_diagonal(0.1);
    let f = cholesky(&r).expect("loaded covariance is definite");
    let c = ComplexVector::basis(3, 0);
    let x = f.solve(&c);
    println!("loaded:    c^H R^-1 c = {:.6}", c.dot(&x).re);

    let residual = project_out(&c, &[&a, &b]);
    println!("part of e0 outside span(a, b): |.|^2 = {:.6}", residual.norm_sqr());
}
