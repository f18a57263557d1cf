//! JSON document form of a path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{CadlagPath, Mode};
use crate::point::Point;

/// Serialized form of a [`CadlagPath`].
///
/// `values[i]` holds the coordinates of the start value at `breakpoints[i]`
/// (one entry for scalar paths, two for planar ones). Step and linear paths
/// need no more: their slopes are implied. Paths produced by the algebra can
/// be affine on each segment without being continuous, so `mode: "affine"`
/// adds an explicit `slopes` array of the same shape.
///
/// Round-trips are bit exact for finite doubles: values go through Ryu on the
/// way out and exact decimal parsing on the way in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathDoc {
    pub mode: String,
    pub horizon: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<Vec<f64>>>,
}

fn coords(p: &Point) -> Vec<f64> {
    p.coords()
}

fn point_from(v: &[f64], index: usize) -> Result<Point> {
    match v {
        [x] => Ok(Point::scalar(*x)),
        [x, y] => Ok(Point::planar(*x, *y)),
        _ => Err(Error::DimMismatch(v.len(), index)),
    }
}

impl PathDoc {
    pub fn from_path(path: &CadlagPath) -> Self {
        let mode = match path.mode() {
            Mode::Step => "step",
            Mode::Linear => "linear",
            Mode::Affine => "affine",
        };
        PathDoc {
            mode: mode.to_string(),
            horizon: path.horizon(),
            breakpoints: path.times().to_vec(),
            values: path.values().iter().map(coords).collect(),
            slopes: match path.mode() {
                Mode::Affine => Some(path.slopes().iter().map(coords).collect()),
                _ => None,
            },
        }
    }

    pub fn to_path(&self) -> Result<CadlagPath> {
        let values: Vec<Point> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| point_from(v, i))
            .collect::<Result<_>>()?;
        match self.mode.as_str() {
            "step" => CadlagPath::new(&self.breakpoints, &values, Mode::Step, self.horizon),
            "linear" => CadlagPath::new(&self.breakpoints, &values, Mode::Linear, self.horizon),
            "affine" => {
                let raw = self.slopes.as_ref().ok_or(Error::BadFormat(
                    "affine path document is missing its slopes array",
                ))?;
                if raw.len() != values.len() {
                    return Err(Error::LengthMismatch { expected: values.len(), got: raw.len() });
                }
                let slopes: Vec<Point> = raw
                    .iter()
                    .enumerate()
                    .map(|(i, v)| point_from(v, i))
                    .collect::<Result<_>>()?;
                CadlagPath::from_checked_parts(&self.breakpoints, &values, &slopes, self.horizon)
            }
            _ => Err(Error::BadFormat("mode must be step, linear, or affine")),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|_| Error::BadFormat("not a valid path document"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::combine;
    use proptest::prelude::*;

    #[test]
    fn step_round_trip_is_bit_exact() {
        let p = CadlagPath::step(&[0.0, 0.1, 0.30000000000000004], &[1.5, -2.25, 0.1], 1.0)
            .unwrap();
        let doc = PathDoc::from_path(&p);
        let back = PathDoc::from_json(&doc.to_json()).unwrap().to_path().unwrap();
        assert_eq!(back.times(), p.times());
        assert_eq!(back.values(), p.values());
        assert_eq!(back.horizon(), p.horizon());
        assert_eq!(back.mode(), p.mode());
    }

    #[test]
    fn affine_round_trip_keeps_slopes() {
        let steps = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        let ramp = CadlagPath::linear(&[0.0, 2.0], &[0.0, 2.0], 2.0).unwrap();
        let z = combine(1.0, &steps, 1.0, &ramp).unwrap();
        assert_eq!(z.mode(), Mode::Affine);
        let doc = PathDoc::from_path(&z);
        assert!(doc.slopes.is_some());
        let back = PathDoc::from_json(&doc.to_json()).unwrap().to_path().unwrap();
        assert_eq!(back.times(), z.times());
        assert_eq!(back.values(), z.values());
        assert_eq!(back.slopes(), z.slopes());
    }

    #[test]
    fn planar_values_carry_both_coordinates() {
        let p = CadlagPath::step_planar(&[0.0, 1.0], &[[1.0, 2.0], [3.0, 4.0]], 2.0).unwrap();
        let doc = PathDoc::from_path(&p);
        assert_eq!(doc.values, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let back = doc.to_path().unwrap();
        assert_eq!(back.values(), p.values());
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(PathDoc::from_json("{\"mode\":").is_err());
        let doc = PathDoc {
            mode: "spline".into(),
            horizon: 1.0,
            breakpoints: vec![0.0],
            values: vec![vec![0.0]],
            slopes: None,
        };
        assert!(matches!(doc.to_path(), Err(Error::BadFormat(_))));
        let doc = PathDoc {
            mode: "affine".into(),
            horizon: 1.0,
            breakpoints: vec![0.0],
            values: vec![vec![0.0]],
            slopes: None,
        };
        assert!(matches!(doc.to_path(), Err(Error::BadFormat(_))));
    }

    proptest! {
        #[test]
        fn round_trip_any_step_path(
            raw in proptest::collection::vec((0.01f64..10.0, -100.0f64..100.0), 1..20),
            tail in 0.0f64..5.0,
        ) {
            let mut t = 0.0;
            let mut times = vec![0.0];
            let mut values = vec![raw[0].1];
            for &(dt, v) in &raw[1..] {
                t += dt;
                times.push(t);
                values.push(v);
            }
            let p = CadlagPath::step(&times, &values, t + tail).unwrap();
            let doc = PathDoc::from_json(&PathDoc::from_path(&p).to_json()).unwrap();
            let back = doc.to_path().unwrap();
            prop_assert_eq!(back.times(), p.times());
            prop_assert_eq!(back.values(), p.values());
            prop_assert_eq!(back.horizon(), p.horizon());
        }

        #[test]
        fn round_trip_any_linear_path(
            raw in proptest::collection::vec((0.01f64..10.0, -100.0f64..100.0), 2..20),
        ) {
            let mut t = 0.0;
            let mut times = vec![0.0];
            let mut values = vec![raw[0].1];
            for &(dt, v) in &raw[1..] {
                t += dt;
                times.push(t);
                values.push(v);
            }
            let p = CadlagPath::linear(&times, &values, t).unwrap();
            let back = PathDoc::from_json(&PathDoc::from_path(&p).to_json())
                .unwrap()
                .to_path()
                .unwrap();
            prop_assert_eq!(back.times(), p.times());
            prop_assert_eq!(back.values(), p.values());
            prop_assert_eq!(back.slopes(), p.slopes());
        }
    }
}
