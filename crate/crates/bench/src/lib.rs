//! Workloads shared by the benchmarks.

use wronski_core::criterion::{compute_wronskians, EntryMethod, WronskianTable};
use wronski_core::groebner::Budget;
use wronski_core::mapzoo;
use wronski_core::{build_tables, DerivationTables, PolyMatrix, PolynomialMap};

pub fn nagata() -> PolynomialMap {
    mapzoo::nagata()
}

pub fn nagata_tables() -> DerivationTables {
    build_tables(&nagata()).expect("unit Jacobian")
}

pub fn druzkowski13() -> PolynomialMap {
    mapzoo::druzkowski13().map
}

/// Jacobian of a triangular 4-variable map, dense enough that cofactor
/// expansion and elimination both do real work.
pub fn triangular4_jacobian() -> PolyMatrix {
    let text = "F1 = x1\n\
                F2 = x2 + x1^3\n\
                F3 = x3 + x1*x2^2 - x2\n\
                F4 = x4 + x3^2*x1 + x2^3\n";
    let map = mapzoo::parse_map(text).expect("valid map");
    let linear = mapzoo::linear(&shuffle4()).expect("square");
    let mixed = map.compose(linear.components()).expect("same arity");
    PolynomialMap::new(mixed, "mixed4").expect("arity 4").jacobian()
}

fn shuffle4() -> Vec<Vec<wronski_core::Rational>> {
    let rows = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 1, 0, 1]];
    rows.iter().map(|r| r.iter().map(|&v| wronski_core::polyring::integer(v)).collect()).collect()
}

pub fn wronskians(tables: &DerivationTables, full: bool) -> WronskianTable {
    compute_wronskians(tables, full, EntryMethod::Auto, &Budget::unlimited()).expect("unlimited budget")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_well_formed() {
        let j = triangular4_jacobian();
        let det = j.determinant_cofactor().unwrap();
        assert!(det.is_constant() && !det.is_zero());
        assert_eq!(j.determinant_bareiss().unwrap(), det);
        let tables = nagata_tables();
        assert_eq!(wronskians(&tables, false).get(0, 0, 1), wronskians(&tables, true).get(0, 0, 1));
    }
}
