//! Numerical data of the blow-up `Y` of the toric surface of a Newton
//! polygon at the point `(1, 1)`, and the eleven-condition report.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::{intersection_numbers, minus_k_polygon, normal_fan};
use crate::error::{Error, Result};
use crate::exact_arith::{serialize_rational, Char};
use crate::lattice_geom::{rat, IntegralPolygon};
use crate::laurent_poly::LaurentPoly;

/// Intersection numbers on `Y` for the proper transform `C` of the curve of
/// a polynomial with Newton polygon `P` and multiplicity `r`, and the
/// exceptional curve `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupNumbers {
    pub c_squared: i64,
    pub c_dot_e: i64,
    pub e_squared: i64,
    pub c_dot_minus_k: i64,
    #[serde(serialize_with = "serialize_rational")]
    pub minus_k_x_squared: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub minus_k_y_squared: BigRational,
    /// `C.(K + C) + 2`, twice the arithmetic genus of `C`.
    pub adjunction: i64,
}

pub fn blowup_numbers(p: &IntegralPolygon, r: i64) -> Result<BlowupNumbers> {
    p.require_2d()?;
    if r < 1 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let counts = p.lattice_points();
    let (b, i) = (counts.boundary as i64, counts.interior as i64);
    let kx = intersection_numbers(&normal_fan(p)?).k_squared;
    Ok(BlowupNumbers {
        c_squared: p.area2() - r * r,
        c_dot_e: r,
        e_squared: -1,
        c_dot_minus_k: b - r,
        minus_k_y_squared: &kx - rat(1),
        minus_k_x_squared: kx,
        adjunction: 2 * i - r * (r - 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionStatus {
    True,
    False,
    ImpliedTrue(String),
    ImpliedFalse(String),
    Unknown,
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionStatus::True | ConditionStatus::ImpliedTrue(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, ConditionStatus::False | ConditionStatus::ImpliedFalse(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ConditionStatus::True => "true",
            ConditionStatus::False => "false",
            ConditionStatus::ImpliedTrue(_) => "implied_true",
            ConditionStatus::ImpliedFalse(_) => "implied_false",
            ConditionStatus::Unknown => "unknown",
        }
    }

    pub fn provenance(&self) -> &str {
        match self {
            ConditionStatus::True | ConditionStatus::False => "computed",
            ConditionStatus::ImpliedTrue(s) | ConditionStatus::ImpliedFalse(s) => s,
            ConditionStatus::Unknown => "",
        }
    }
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.provenance() {
            "" | "computed" => write!(f, "{}", self.label()),
            p => write!(f, "{} ({})", self.label(), p),
        }
    }
}

impl Serialize for ConditionStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConditionStatus", 2)?;
        st.serialize_field("status", self.label())?;
        st.serialize_field("provenance", self.provenance())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub index: u8,
    #[serde(flatten)]
    pub status: ConditionStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm36Report {
    pub r: i64,
    pub char: Char,
    pub conditions: Vec<Condition>,
    pub area2: i64,
    pub boundary: i64,
    pub interior: i64,
    pub fan_rays: usize,
    pub c_squared: i64,
    pub c_dot_minus_k: i64,
    #[serde(serialize_with = "serialize_rational")]
    pub minus_k_x_squared: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub minus_k_y_squared: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub minus_k_polygon_area2: BigRational,
}

impl Thm36Report {
    pub fn status(&self, index: u8) -> &ConditionStatus {
        &self.conditions[index as usize - 1].status
    }
}

/// Edges of the implication diagram, `(from, to)`.
pub const IMPLICATIONS: [(u8, u8); 13] =
    [(1, 2), (1, 3), (2, 7), (3, 4), (4, 5), (5, 6), (5, 8), (6, 10), (7, 8), (8, 9), (9, 8), (8, 10), (11, 9)];

/// Closes the statuses under the diagram in both directions (an implied
/// condition that fails refutes its premise). Any clash is an error.
pub fn close_under_diagram(status: &mut [ConditionStatus; 11]) -> Result<()> {
    loop {
        let mut changed = false;
        for &(x, y) in IMPLICATIONS.iter() {
            let (xi, yi) = (x as usize - 1, y as usize - 1);
            if status[xi].holds() {
                if status[yi].fails() {
                    return Err(Error::Contradiction(format!("({x}) holds but ({y}) fails")));
                }
                if status[yi] == ConditionStatus::Unknown {
                    status[yi] = ConditionStatus::ImpliedTrue(format!("({x})=>({y})"));
                    changed = true;
                }
            }
            if status[yi].fails() && status[xi] == ConditionStatus::Unknown {
                status[xi] = ConditionStatus::ImpliedFalse(format!("({x})=>({y}), not ({y})"));
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn decided(b: bool) -> ConditionStatus {
    if b {
        ConditionStatus::True
    } else {
        ConditionStatus::False
    }
}

/// Decides (2) [three-ray fans only], (3), (4), (7), (8) = (9), (9); (10)
/// holds in positive characteristic; everything else comes from the diagram.
pub fn thm36_report(phi: &LaurentPoly, r: i64) -> Result<Thm36Report> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = phi.newton_polygon()?;
    let nums = blowup_numbers(&p, r)?;
    let fan = normal_fan(&p)?;
    let pk = minus_k_polygon(&fan)?.area2();
    let counts = p.lattice_points();
    let (b, i) = (counts.boundary as i64, counts.interior as i64);

    let mut st: [ConditionStatus; 11] = std::array::from_fn(|_| ConditionStatus::Unknown);
    if fan.len() == 3 {
        // Picard rank 2: the curve cone is spanned by E and C, and -K.E = 1.
        st[1] = decided(nums.c_dot_minus_k >= 0);
    }
    st[2] = decided(nums.minus_k_y_squared > rat(0));
    st[3] = decided(pk > rat(1));
    st[6] = decided(b >= r);
    st[8] = decided(i == r * (r - 1) / 2);
    st[7] = st[8].clone();
    if phi.char() > 0 {
        st[9] = ConditionStatus::ImpliedTrue("char > 0".into());
    }
    close_under_diagram(&mut st)?;
    Ok(Thm36Report {
        r,
        char: phi.char(),
        conditions: st.into_iter().enumerate().map(|(k, status)| Condition { index: k as u8 + 1, status }).collect(),
        area2: p.area2(),
        boundary: b,
        interior: i,
        fan_rays: fan.len(),
        c_squared: nums.c_squared,
        c_dot_minus_k: nums.c_dot_minus_k,
        minus_k_x_squared: nums.minus_k_x_squared,
        minus_k_y_squared: nums.minus_k_y_squared,
        minus_k_polygon_area2: pk,
    })
}
