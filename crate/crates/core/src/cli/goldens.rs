//! Reference operators and data shipped with the crate.

use crate::pfops::{parse_operator, parse_qpoly, OreOperator, PfError};
use crate::ratqa::QPoly;

macro_rules! operator_files {
    ($($name:literal),*) => {
        &[$(($name, include_str!(concat!("../../goldens/operators/", $name, ".txt")))),*]
    };
}

static OPERATORS: &[(&str, &str)] =
    operator_files!("no4", "no5", "no7", "no13", "no15", "no17", "no18", "no20", "no23", "no24", "no25", "no28");

pub const QDE: &str = include_str!("../../goldens/no25/qde.txt");
pub const FACTORIZATION: &str = include_str!("../../goldens/no25/factorization.txt");
pub const CONNECTION: &str = include_str!("../../goldens/no25/connection.txt");

/// Labels with a reference Picard-Fuchs operator.
pub fn operator_labels() -> Vec<&'static str> {
    OPERATORS.iter().map(|(l, _)| *l).collect()
}

pub fn operator_text(label: &str) -> Option<&'static str> {
    OPERATORS.iter().find(|(l, _)| *l == label).map(|(_, t)| t.trim())
}

/// The reference operator for `label`, normalized.
pub fn operator(label: &str) -> Option<Result<OreOperator, PfError>> {
    operator_text(label).map(|t| parse_operator(t).map(|op| op.normalize()))
}

fn field<'a>(text: &'a str, key: &str) -> Result<&'a str, PfError> {
    text.lines()
        .filter_map(|l| l.split_once(':'))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim())
        .ok_or_else(|| PfError::Parse(format!("golden field {key} missing")))
}

/// The blocks `Q_0 .. Q_6` of the quantum differential operator, as polynomials in `theta`.
pub fn qde_blocks() -> Result<Vec<OreOperator>, PfError> {
    (0..)
        .map_while(|j| field(QDE, &format!("Q{j}")).ok())
        .map(parse_operator)
        .collect()
}

/// The operator `sum_j q^j Q_j(theta)`.
pub fn qde() -> Result<OreOperator, PfError> {
    let blocks: Vec<QPoly> = qde_blocks()?
        .iter()
        .map(|b| QPoly::new(b.coeffs().iter().map(|c| c.coeff(0)).collect()))
        .collect();
    Ok(OreOperator::from_q_major(&blocks))
}

/// `(left, r, R)` of the factorization of the Lefschetz transform.
pub fn factorization() -> Result<(OreOperator, QPoly, OreOperator), PfError> {
    Ok((
        parse_operator(field(FACTORIZATION, "left")?)?,
        parse_qpoly(field(FACTORIZATION, "r")?)?,
        parse_operator(field(FACTORIZATION, "R4")?)?,
    ))
}

/// Entries of the connection matrix.
pub fn connection() -> Result<Vec<Vec<QPoly>>, PfError> {
    CONNECTION
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|e| parse_qpoly(e.trim())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_goldens_parse() {
        for l in operator_labels() {
            let op = operator(l).unwrap().unwrap();
            assert_eq!(op.order(), Some(4), "{l}");
        }
        assert_eq!(qde_blocks().unwrap().len(), 7);
        assert_eq!(qde().unwrap().q_degree(), Some(6));
        let (left, r, r4) = factorization().unwrap();
        assert_eq!(left.order(), Some(4));
        assert_eq!(r.degree(), Some(5));
        assert_eq!(r4.order(), Some(4));
        let m = connection().unwrap();
        assert!(m.len() == 8 && m.iter().all(|r| r.len() == 8));
    }
}
