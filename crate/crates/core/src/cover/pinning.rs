use serde::{Deserialize, Serialize};

use super::model::{Point, SubspaceFamily};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pinning {
    pub points: Vec<Point>,
    /// Indices of the members containing every chosen point.
    pub survivors: Vec<usize>,
}

/// Points of the seed member that no other member contains all of. While
/// another member survives, the lexicographically smallest point of the seed
/// outside the first such member is added.
pub fn chow_pinning(family: &SubspaceFamily, seed: usize) -> Result<Pinning> {
    let members = family.members();
    let x0 = members
        .get(seed)
        .ok_or_else(|| Error::input(format!("seed {seed} out of range ({} members)", members.len())))?;
    let seed_points = x0.points()?;
    let mut points: Vec<Point> = Vec::new();
    loop {
        let survivors: Vec<usize> = (0..members.len())
            .filter(|&i| points.iter().all(|p| members[i].contains_point(p)))
            .collect();
        let Some(&w) = survivors.iter().find(|&&i| i != seed) else {
            return Ok(Pinning { points, survivors });
        };
        let p = seed_points
            .iter()
            .find(|p| !members[w].contains_point(p))
            .expect("distinct members of one dimension differ on the seed")
            .clone();
        points.push(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::model::AffineSubspace;

    #[test]
    fn four_lines_need_one_point() {
        let fam = SubspaceFamily::lines_through_origin(3).unwrap();
        assert_eq!(fam.len(), 4);
        for seed in 0..4 {
            let pin = chow_pinning(&fam, seed).unwrap();
            assert_eq!(pin.points.len(), 1);
            assert_ne!(pin.points[0], vec![0, 0]);
            assert_eq!(pin.survivors, vec![seed]);
        }
    }

    #[test]
    fn single_member_and_parallel_lines() {
        let l1 = AffineSubspace::new(5, vec![0, 0], vec![vec![1, 0]]).unwrap();
        let l2 = AffineSubspace::new(5, vec![0, 1], vec![vec![1, 0]]).unwrap();
        let one = SubspaceFamily::new(5, 2, vec![l1.clone()]).unwrap();
        assert!(chow_pinning(&one, 0).unwrap().points.is_empty());
        let two = SubspaceFamily::new(5, 2, vec![l1, l2]).unwrap();
        let pin = chow_pinning(&two, 0).unwrap();
        assert_eq!(pin.points, vec![vec![0, 0]]);
        assert_eq!(pin.survivors, vec![0]);
        assert!(chow_pinning(&two, 2).is_err());
    }
}
