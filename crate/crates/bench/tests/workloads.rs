use wronski_bench::{druzkowski13, nagata_tables, triangular4_jacobian, wronskians};
use wronski_core::Polynomial;

#[test]
fn determinant_methods_agree() {
    let j = triangular4_jacobian();
    let det = j.determinant().unwrap();
    assert_eq!(j.determinant_cofactor().unwrap(), det);
    assert_eq!(j.determinant_bareiss().unwrap(), det);
    assert_eq!(druzkowski13().jacobian().determinant().unwrap(), Polynomial::one(13));
}

#[test]
fn reduced_and_full_wronskians_agree() {
    let tables = nagata_tables();
    let reduced = wronskians(&tables, false);
    let full = wronskians(&tables, true);
    for idx in full.indices() {
        assert_eq!(reduced.get(idx.k, idx.i, idx.j), full.get(idx.k, idx.i, idx.j), "{idx}");
    }
}
