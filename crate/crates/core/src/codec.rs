//! Genotype encoding.
//!
//! A genotype holds one real gene in `[0, 1]` per (UAV, visitable cell),
//! UAV-major. A gene picks one of the cell's feasible moves by splitting
//! `[0, 1)` into equal intervals over the canonically ordered move list; the
//! chosen moves form that UAV's movement map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gridmap::{Direction, GridMap, Topology};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("gene {index} = {value} is outside [0, 1]")]
    GeneOutOfRange { index: usize, value: f64 },
    #[error("cannot decode a gene over an empty move set")]
    NoMoves,
    #[error("genotype has {found} genes, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// A validated real-coded genotype.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Genotype(Vec<f64>);

impl Genotype {
    pub fn new(genes: Vec<f64>) -> Result<Self, CodecError> {
        if let Some((index, &value)) = genes
            .iter()
            .enumerate()
            .find(|(_, g)| !(0.0..=1.0).contains(*g))
        {
            return Err(CodecError::GeneOutOfRange { index, value });
        }
        Ok(Self(genes))
    }

    /// Wraps genes produced internally (uniform draws, crossover of valid
    /// parents) without re-checking. Debug builds still assert the range.
    pub(crate) fn from_valid(genes: Vec<f64>) -> Self {
        debug_assert!(genes.iter().all(|g| (0.0..=1.0).contains(g)));
        Self(genes)
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_genes(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Genotype {
    type Error = CodecError;

    fn try_from(genes: Vec<f64>) -> Result<Self, Self::Error> {
        Genotype::new(genes)
    }
}

impl From<Genotype> for Vec<f64> {
    fn from(g: Genotype) -> Self {
        g.0
    }
}

/// Number of genes for `uavs` UAVs on `map`.
pub fn genotype_length(map: &GridMap, uavs: usize) -> usize {
    uavs * map.visitable_count()
}

/// Interval index `min(floor(g * k), k - 1)` of gene `g` over `k` moves.
pub fn decode_gene(g: f64, k: usize) -> Result<usize, CodecError> {
    if !(0.0..=1.0).contains(&g) {
        return Err(CodecError::GeneOutOfRange { index: 0, value: g });
    }
    if k == 0 {
        return Err(CodecError::NoMoves);
    }
    Ok(interval(g, k))
}

#[inline]
pub(crate) fn interval(g: f64, k: usize) -> usize {
    ((g * k as f64) as usize).min(k - 1)
}

/// The direction assigned to each visitable cell for one UAV. `None` marks a
/// cell without feasible moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MovementMap {
    moves: Vec<Option<Direction>>,
}

impl MovementMap {
    /// Wraps a per-cell move list; cell `i` is the `i`-th visitable cell.
    pub fn from_moves(moves: Vec<Option<Direction>>) -> Self {
        Self { moves }
    }

    pub fn get(&self, cell: usize) -> Option<Direction> {
        self.moves[cell]
    }

    pub fn moves(&self) -> &[Option<Direction>] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Grid rendering: `^ v < >` for moves, `.` for cells without one, `#`
    /// for obstacles. One string per grid row.
    pub fn to_rows(&self, map: &GridMap, topo: &Topology) -> Vec<String> {
        (0..map.rows())
            .map(|row| {
                (0..map.cols())
                    .map(
                        |col| match topo.index_of(crate::gridmap::Coord::new(row, col)) {
                            None => '#',
                            Some(i) => self.moves[i].map_or('.', Direction::ascii),
                        },
                    )
                    .collect()
            })
            .collect()
    }
}

/// Decodes one movement map per UAV from `genotype`.
pub fn build_movement_maps(
    genotype: &Genotype,
    map: &GridMap,
    uavs: usize,
) -> Result<Vec<MovementMap>, CodecError> {
    decode_with(genotype, &map.topology(), uavs)
}

pub(crate) fn decode_with(
    genotype: &Genotype,
    topo: &Topology,
    uavs: usize,
) -> Result<Vec<MovementMap>, CodecError> {
    let v = topo.len();
    if genotype.len() != uavs * v {
        return Err(CodecError::LengthMismatch {
            expected: uavs * v,
            found: genotype.len(),
        });
    }
    Ok(genotype
        .genes()
        .chunks(v)
        .map(|genes| MovementMap {
            moves: genes
                .iter()
                .enumerate()
                .map(|(cell, &g)| {
                    let options = topo.moves(cell);
                    (!options.is_empty()).then(|| options[interval(g, options.len())].0)
                })
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmap::{builtin, builtin_maps, Coord};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn genotype_lengths() {
        assert_eq!(genotype_length(&builtin("map1").unwrap(), 1), 49);
        assert_eq!(genotype_length(&builtin("map6").unwrap(), 4), 240);
        let free = GridMap::parse("f", "2 2\n..\n..").unwrap();
        assert_eq!(genotype_length(&free, 1), 4);
    }

    #[test]
    fn decode_gene_examples() {
        assert_eq!(decode_gene(0.6, 4), Ok(2));
        for k in 1..=4 {
            assert_eq!(decode_gene(0.0, k), Ok(0));
            assert_eq!(decode_gene(1.0, k), Ok(k - 1));
        }
        assert_eq!(decode_gene(1.0, 3), Ok(2));
        assert_eq!(decode_gene(0.5, 2), Ok(1));
        assert_eq!(decode_gene(0.4999, 2), Ok(0));
        assert_eq!(decode_gene(0.5, 0), Err(CodecError::NoMoves));
        assert!(matches!(
            decode_gene(1.01, 2),
            Err(CodecError::GeneOutOfRange { .. })
        ));
        assert!(decode_gene(-0.0, 2).is_ok());
        assert!(decode_gene(f64::NAN, 2).is_err());
    }

    #[test]
    fn genotype_rejects_out_of_range() {
        assert!(Genotype::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert_eq!(
            Genotype::new(vec![0.2, 1.5]),
            Err(CodecError::GeneOutOfRange {
                index: 1,
                value: 1.5
            })
        );
        let json = serde_json::to_string(&Genotype::new(vec![0.125, 1.0]).unwrap()).unwrap();
        assert_eq!(json, "[0.125,1.0]");
        assert!(serde_json::from_str::<Genotype>("[0.5,-1.0]").is_err());
    }

    #[test]
    fn all_zero_genotype_takes_first_move() {
        use Direction::*;
        let m = builtin("map1").unwrap();
        let g = Genotype::new(vec![0.0; 49]).unwrap();
        let mm = &build_movement_maps(&g, &m, 1).unwrap()[0];
        for (i, c) in m.visitable_cells().into_iter().enumerate() {
            let expected = if c.row > 0 {
                Up
            } else if c.row < 6 {
                Down
            } else {
                unreachable!()
            };
            assert_eq!(mm.get(i), Some(expected));
        }
    }

    #[test]
    fn high_genes_take_last_move() {
        use Direction::*;
        let m = GridMap::parse("f", "2 2\n..\n..").unwrap();
        let g = Genotype::new(vec![0.99; 4]).unwrap();
        let mm = &build_movement_maps(&g, &m, 1).unwrap()[0];
        assert_eq!(
            mm.moves(),
            &[Some(Right), Some(Left), Some(Right), Some(Left)]
        );
    }

    #[test]
    fn isolated_cell_has_no_move() {
        let m = GridMap::parse("i", "3 3\n.#.\n#.#\n.#.").unwrap();
        let topo = m.topology();
        let centre = topo.index_of(Coord::new(1, 1)).unwrap();
        let g = Genotype::new(vec![0.7; 5]).unwrap();
        let mm = &build_movement_maps(&g, &m, 1).unwrap()[0];
        assert_eq!(mm.get(centre), None);
    }

    #[test]
    fn length_mismatch() {
        let m = builtin("map1").unwrap();
        let g = Genotype::new(vec![0.5; 48]).unwrap();
        assert_eq!(
            build_movement_maps(&g, &m, 1),
            Err(CodecError::LengthMismatch {
                expected: 49,
                found: 48
            })
        );
    }

    #[test]
    fn decoding_is_total_and_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in builtin_maps() {
            let topo = m.topology();
            for uavs in 1..=4 {
                for _ in 0..10_000 / 24 + 1 {
                    let genes: Vec<f64> = (0..genotype_length(&m, uavs))
                        .map(|_| rng.gen_range(0.0..=1.0))
                        .collect();
                    let g = Genotype::new(genes).unwrap();
                    let maps = build_movement_maps(&g, &m, uavs).unwrap();
                    assert_eq!(maps.len(), uavs);
                    for mm in &maps {
                        for (i, mv) in mm.moves().iter().enumerate() {
                            let c = topo.coord(i);
                            let d = mv.expect("built-in maps have no isolated cells");
                            let target = c.step(d).unwrap();
                            assert!(m.is_visitable(target), "{} {c} {d}", m.id());
                        }
                    }
                    assert_eq!(maps, build_movement_maps(&g, &m, uavs).unwrap());
                }
            }
        }
    }

    #[test]
    fn movement_map_rows() {
        let m = GridMap::parse("t", "2 3\n.#.\n...").unwrap();
        let g = Genotype::new(vec![0.0; 5]).unwrap();
        let mm = &build_movement_maps(&g, &m, 1).unwrap()[0];
        assert_eq!(mm.to_rows(&m, &m.topology()), vec!["v#v", "^<^"]);
    }

    proptest! {
        #[test]
        fn decode_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, k in 1usize..=4) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(decode_gene(lo, k).unwrap() <= decode_gene(hi, k).unwrap());
        }

        #[test]
        fn every_interval_is_reachable(k in 1usize..=4, j in 0usize..4) {
            prop_assume!(j < k);
            let mid = (j as f64 + 0.5) / k as f64;
            prop_assert_eq!(decode_gene(mid, k).unwrap(), j);
            prop_assert_eq!(decode_gene(j as f64 / k as f64, k).unwrap(), j);
        }
    }
}
