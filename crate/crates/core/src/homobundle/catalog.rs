use serde::{Deserialize, Serialize};

use super::spec::{BundleSummand as B, TargetSpec};

/// Which computation produces the I-series of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Abelianization,
    Qconn,
    Pdelta,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Abelianization => "abelianization",
            Pipeline::Qconn => "qconn",
            Pipeline::Pdelta => "pdelta",
        }
    }
}

impl std::fmt::Display for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "abelianization" | "abelian" => Ok(Pipeline::Abelianization),
            "qconn" => Ok(Pipeline::Qconn),
            "pdelta" | "p_delta" => Ok(Pipeline::Pdelta),
            _ => Err(format!("unknown pipeline '{s}' (abelianization | qconn | pdelta)")),
        }
    }
}

/// One row of the target table, with the reference invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogRow {
    pub no: u32,
    pub spec: TargetSpec,
    pub h3: i64,
    pub c2h: i64,
    pub c3: i64,
    pub kuchle: String,
    pub database: String,
    pub pipeline: Pipeline,
    /// Row whose I-function is used in place of this one, with the reason.
    pub alias: Option<(u32, String)>,
}

impl CatalogRow {
    pub fn label(&self) -> &str {
        &self.spec.label
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown target '{0}'")]
pub struct NotFound(pub String);

fn lines(t: i64, m: usize) -> Vec<B> {
    vec![B::line(t); m]
}

fn cat(parts: Vec<Vec<B>>) -> Vec<B> {
    parts.into_iter().flatten().collect()
}

#[allow(clippy::too_many_arguments)]
fn row(no: u32, k: usize, n: usize, summands: Vec<B>, inv: (i64, i64, i64), kuchle: &str, db: &str) -> CatalogRow {
    let spec = TargetSpec::new(&format!("no{no}"), k, n, summands);
    let pipeline = if spec.has_q() && spec.has_sdual() {
        match no {
            18 => Pipeline::Pdelta,
            16 => Pipeline::Abelianization,
            _ => Pipeline::Qconn,
        }
    } else {
        Pipeline::Abelianization
    };
    CatalogRow {
        no,
        spec,
        h3: inv.0,
        c2h: inv.1,
        c3: inv.2,
        kuchle: kuchle.to_string(),
        database: db.to_string(),
        pipeline,
        alias: None,
    }
}

/// The 22 Calabi-Yau rows, numbered as in the reference table (with gaps).
pub fn catalog() -> Vec<CatalogRow> {
    let alt2 = |t: i64| B::sdual(&[1, 1], t);
    let mut rows = vec![
        row(1, 2, 4, lines(4, 1), (8, 56, -176), "", "6"),
        row(2, 2, 5, cat(vec![lines(1, 1), lines(2, 2)]), (20, 68, -120), "(b2)", "25"),
        row(3, 2, 5, cat(vec![lines(1, 2), lines(3, 1)]), (15, 66, -150), "(b1)", "24"),
        row(4, 2, 5, vec![B::sdual(&[1], 1), B::line(2)], (24, 72, -116), "", "29"),
        row(5, 2, 5, vec![B::q(&[1, 1], 1)], (25, 70, -100), "", "101"),
        row(6, 2, 6, cat(vec![lines(1, 4), lines(2, 1)]), (28, 76, -116), "(b6)", "26"),
        row(7, 2, 6, cat(vec![vec![B::sdual(&[1], 1)], lines(1, 3)]), (33, 78, -102), "(b5), I", "198"),
        row(10, 2, 6, vec![B::q(&[1], 1), B::line(1)], (42, 84, -98), "(b3), II", "27"),
        row(12, 2, 7, lines(1, 7), (42, 84, -98), "(b7), III", "27"),
        row(13, 2, 7, cat(vec![vec![B::sdual(&[2], 0)], lines(1, 4)]), (56, 92, -92), "(b8), V", "212"),
        row(15, 2, 7, vec![B::q(&[1; 4], 0), B::line(1), B::line(2)], (36, 84, -120), "(b10)", "185"),
        row(16, 2, 7, vec![B::sdual(&[1], 1), B::q(&[1; 4], 0)], (42, 84, -98), "", "27"),
        row(17, 2, 8, cat(vec![vec![B::q(&[1; 5], 0)], lines(1, 3)]), (57, 90, -84), "(b11), VI", "186"),
        row(18, 2, 8, vec![B::sdual(&[2], 0), B::q(&[1; 5], 0)], (72, 96, -72), "", "unknown"),
        row(19, 3, 6, lines(1, 6), (42, 84, -96), "(c1), IV", "28"),
        row(20, 3, 6, cat(vec![vec![alt2(0)], lines(1, 2), lines(2, 1)]), (32, 80, -116), "(c2)", "42"),
        row(21, 3, 6, vec![B::sdual(&[1], 1), alt2(0)], (42, 84, -96), "", "28"),
        row(22, 3, 7, cat(vec![vec![B::sdual(&[2], 0)], lines(1, 3)]), (128, 128, -128), "(c4)", "3"),
        row(23, 3, 7, cat(vec![vec![alt2(0), alt2(0)], lines(1, 3)]), (61, 94, -86), "(c6), VII", "124"),
        row(24, 3, 7, vec![B::q(&[1; 3], 0), B::q(&[1; 3], 0), B::line(1)], (72, 96, -74), "(c3), IX", "unknown"),
        row(
            25,
            3,
            7,
            cat(vec![vec![alt2(0), B::q(&[1; 3], 0)], lines(1, 2)]),
            (66, 96, -84),
            "(c5), VIII",
            "unknown",
        ),
        row(28, 3, 8, vec![alt2(0); 4], (92, 104, -64), "", "unknown"),
    ];
    for r in rows.iter_mut() {
        r.alias = match r.no {
            10 => Some((12, "the I-function is the same as No. 12".to_string())),
            16 => Some((12, "deformation equivalent to a linear section of G(2,7), same J-function as No. 12".to_string())),
            _ => None,
        };
    }
    rows
}

/// Look up a row by label (`no7`, `No.7`, `7`).
pub fn lookup(label: &str) -> Result<CatalogRow, NotFound> {
    let digits: String = label.chars().filter(|c| c.is_ascii_digit()).collect();
    let prefix_ok = {
        let l = label.to_ascii_lowercase();
        let rest: String = l.chars().filter(|c| !c.is_ascii_digit()).collect();
        matches!(rest.trim_end_matches(['.', ' ']), "" | "no" | "no.")
    };
    let no: u32 = match (prefix_ok, digits.parse()) {
        (true, Ok(n)) => n,
        _ => return Err(NotFound(label.to_string())),
    };
    catalog().into_iter().find(|r| r.no == no).ok_or_else(|| NotFound(label.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homobundle::Carrier;

    #[test]
    fn row_count_and_numbering() {
        let c = catalog();
        assert_eq!(c.len(), 22);
        let nos: Vec<u32> = c.iter().map(|r| r.no).collect();
        assert_eq!(nos, vec![1, 2, 3, 4, 5, 6, 7, 10, 12, 13, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 28]);
    }

    #[test]
    fn lookups() {
        let r = lookup("no7").unwrap();
        assert_eq!(r.spec.grassmann, [2, 6]);
        assert_eq!(r.spec.summands.len(), 4);
        assert_eq!(r.spec.summands[0], B::sdual(&[1], 1));
        let r18 = lookup("no18").unwrap();
        assert_eq!(r18.spec.summands[1].carrier, Carrier::Q);
        assert_eq!(r18.database, "unknown");
        assert_eq!(r18.pipeline, Pipeline::Pdelta);
        assert!(lookup("no99").is_err());
        assert!(lookup("xyz7").is_err());
        assert_eq!(lookup("25").unwrap().pipeline, Pipeline::Qconn);
    }

    #[test]
    fn every_row_is_calabi_yau() {
        for r in catalog() {
            r.spec.cy_check().unwrap_or_else(|e| panic!("{}: {e}", r.no));
        }
    }
}
