//! Grid environments: the map model, the text file format, the built-in map
//! set and the epoch bounds derived from a map.
//!
//! A map is a rectangular grid of cells. Each cell is either free (`.`) or an
//! obstacle (`#`). UAVs start on the corners, so every corner must be free.
//! Coordinates are 0-based with the origin in the top-left corner; the free
//! cells in row-major order define the canonical cell index used everywhere
//! else in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of UAVs in a swarm (one per corner).
pub const MAX_UAVS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map text is empty")]
    Empty,
    #[error("line 1: expected header \"rows cols\", found {found:?}")]
    BadHeader { found: String },
    #[error("grid must have at least one row and one column, got {rows}x{cols}")]
    BadDimensions { rows: usize, cols: usize },
    #[error("expected {expected} grid rows after the header, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row}: expected {expected} cells, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, col {col}: unknown cell character {ch:?} (expected '.' or '#')")]
    UnknownChar { row: usize, col: usize, ch: char },
    #[error("row {row}, col {col}: corner cell is an obstacle (corners are UAV start cells)")]
    CornerObstacle { row: usize, col: usize },
    #[error("obstacle mask has {found} cells, expected {expected}")]
    MaskSize { expected: usize, found: usize },
    #[error("cell ({row}, {col}) is outside the {rows}x{cols} grid")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cell ({row}, {col}) is an obstacle")]
    Obstacle { row: usize, col: usize },
    #[error("UAV count {0} is outside 1..=4")]
    UavCount(usize),
    #[error("UAV count {uavs} exceeds the {visitable} visitable cells")]
    TooManyUavs { uavs: usize, visitable: usize },
    #[error("start corners coincide on a {rows}x{cols} grid with {uavs} UAVs")]
    StartsCoincide {
        rows: usize,
        cols: usize,
        uavs: usize,
    },
}

/// A cell position, 0-based from the top-left corner.
///
/// Serializes as a `[row, col]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// The neighbouring coordinate in `dir`, or `None` when it would leave the
    /// non-negative quadrant. Upper bounds are the caller's business.
    pub fn step(self, dir: Direction) -> Option<Coord> {
        let (dr, dc) = dir.delta();
        let row = self.row.checked_add_signed(dr)?;
        let col = self.col.checked_add_signed(dc)?;
        Some(Coord { row, col })
    }
}

impl From<(usize, usize)> for Coord {
    fn from((row, col): (usize, usize)) -> Self {
        Coord { row, col }
    }
}

impl From<Coord> for (usize, usize) {
    fn from(c: Coord) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// One of the four discrete moves. The declaration order is the canonical
/// order used for feasible-move lists and gene decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Up,
        Direction::Down,
        Direction::Left,
        Direction::Right,
    ];

    pub fn delta(self) -> (isize, isize) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    /// Direction of a unit step from `from` to `to`, if they are 4-adjacent.
    pub fn between(from: Coord, to: Coord) -> Option<Direction> {
        Direction::ALL
            .into_iter()
            .find(|&d| from.step(d) == Some(to))
    }

    pub fn arrow(self) -> char {
        match self {
            Direction::Up => '↑',
            Direction::Down => '↓',
            Direction::Left => '←',
            Direction::Right => '→',
        }
    }

    pub fn ascii(self) -> char {
        match self {
            Direction::Up => '^',
            Direction::Down => 'v',
            Direction::Left => '<',
            Direction::Right => '>',
        }
    }

    pub fn from_ascii(ch: char) -> Option<Direction> {
        match ch {
            '^' => Some(Direction::Up),
            'v' => Some(Direction::Down),
            '<' => Some(Direction::Left),
            '>' => Some(Direction::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        };
        f.write_str(name)
    }
}

/// A rectangular cell grid with an obstacle mask.
///
/// Immutable once constructed; every constructor validates the invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    id: String,
    rows: usize,
    cols: usize,
    obstacles: Vec<bool>,
}

impl GridMap {
    /// Builds a map from a row-major obstacle mask (`true` = obstacle).
    pub fn new(
        id: impl Into<String>,
        rows: usize,
        cols: usize,
        obstacles: Vec<bool>,
    ) -> Result<Self, MapError> {
        if rows == 0 || cols == 0 {
            return Err(MapError::BadDimensions { rows, cols });
        }
        if obstacles.len() != rows * cols {
            return Err(MapError::MaskSize {
                expected: rows * cols,
                found: obstacles.len(),
            });
        }
        for (row, col) in [(0, 0), (rows - 1, 0), (0, cols - 1), (rows - 1, cols - 1)] {
            if obstacles[row * cols + col] {
                return Err(MapError::CornerObstacle { row, col });
            }
        }
        Ok(Self {
            id: id.into(),
            rows,
            cols,
            obstacles,
        })
    }

    /// Parses the map file format: a `rows cols` header line followed by
    /// `rows` lines of `.` (free) and `#` (obstacle). LF or CRLF line endings
    /// are accepted and trailing whitespace is ignored. Error locations are
    /// 0-based grid coordinates.
    pub fn parse(id: impl Into<String>, text: &str) -> Result<Self, MapError> {
        let mut lines = text.lines().map(str::trim_end);
        let header = loop {
            match lines.next() {
                None => return Err(MapError::Empty),
                Some("") => continue,
                Some(h) => break h,
            }
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| MapError::BadHeader {
                found: header.to_string(),
            })?;
        let [rows, cols] = dims[..] else {
            return Err(MapError::BadHeader {
                found: header.to_string(),
            });
        };
        if rows == 0 || cols == 0 {
            return Err(MapError::BadDimensions { rows, cols });
        }

        let body: Vec<&str> = lines.collect();
        // Trailing blank lines are tolerated; blank lines inside the grid are not.
        let used = body
            .iter()
            .rposition(|l| !l.is_empty())
            .map_or(0, |i| i + 1);
        if used != rows {
            return Err(MapError::RowCount {
                expected: rows,
                found: used,
            });
        }

        let mut obstacles = Vec::with_capacity(rows * cols);
        for (row, line) in body[..used].iter().enumerate() {
            let found = line.chars().count();
            if found != cols {
                return Err(MapError::Ragged {
                    row,
                    expected: cols,
                    found,
                });
            }
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '.' => obstacles.push(false),
                    '#' => obstacles.push(true),
                    _ => return Err(MapError::UnknownChar { row, col, ch }),
                }
            }
        }
        Self::new(id, rows, cols, obstacles)
    }

    /// Serializes to the map file format (LF line endings, trailing newline).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for row in 0..self.rows {
            for col in 0..self.cols {
                out.push(if self.obstacles[row * self.cols + col] {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.row < self.rows && c.col < self.cols
    }

    /// `true` for obstacles; out-of-bounds cells also count as blocked.
    pub fn is_blocked(&self, c: Coord) -> bool {
        !self.contains(c) || self.obstacles[c.row * self.cols + c.col]
    }

    pub fn is_visitable(&self, c: Coord) -> bool {
        !self.is_blocked(c)
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacles.iter().filter(|&&o| o).count()
    }

    pub fn visitable_count(&self) -> usize {
        self.rows * self.cols - self.obstacle_count()
    }

    /// Free cells in row-major order. Position in this list is the cell index.
    pub fn visitable_cells(&self) -> Vec<Coord> {
        (0..self.rows)
            .flat_map(|row| (0..self.cols).map(move |col| Coord { row, col }))
            .filter(|&c| self.is_visitable(c))
            .collect()
    }

    /// Moves that lead from `cell` to an in-grid free neighbour, in
    /// canonical (Up, Down, Left, Right) order.
    pub fn feasible_moves(&self, cell: Coord) -> Result<Vec<Direction>, MapError> {
        self.check_visitable(cell)?;
        Ok(Direction::ALL
            .into_iter()
            .filter(|&d| cell.step(d).is_some_and(|n| self.is_visitable(n)))
            .collect())
    }

    fn check_visitable(&self, c: Coord) -> Result<(), MapError> {
        if !self.contains(c) {
            return Err(MapError::OutOfBounds {
                row: c.row,
                col: c.col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.is_blocked(c) {
            return Err(MapError::Obstacle {
                row: c.row,
                col: c.col,
            });
        }
        Ok(())
    }

    fn check_uavs(&self, uavs: usize) -> Result<(), MapError> {
        if !(1..=MAX_UAVS).contains(&uavs) {
            return Err(MapError::UavCount(uavs));
        }
        let visitable = self.visitable_count();
        if uavs > visitable {
            return Err(MapError::TooManyUavs { uavs, visitable });
        }
        Ok(())
    }

    /// Start cells for `uavs` UAVs: top-left, bottom-left, top-right,
    /// bottom-right, truncated to the swarm size.
    pub fn start_positions(&self, uavs: usize) -> Result<Vec<Coord>, MapError> {
        self.check_uavs(uavs)?;
        let (r, c) = (self.rows - 1, self.cols - 1);
        let starts: Vec<Coord> = [(0, 0), (r, 0), (0, c), (r, c)]
            .into_iter()
            .take(uavs)
            .map(Coord::from)
            .collect();
        for (i, a) in starts.iter().enumerate() {
            if starts[..i].contains(a) {
                return Err(MapError::StartsCoincide {
                    rows: self.rows,
                    cols: self.cols,
                    uavs,
                });
            }
        }
        Ok(starts)
    }

    /// Lower bound on the epochs needed to cover the map: every UAV visits at
    /// most one new cell per epoch and the starts are covered for free, so
    /// `ceil((V - n) / n)`.
    pub fn theoretical_min_epochs(&self, uavs: usize) -> Result<u32, MapError> {
        self.check_uavs(uavs)?;
        let v = self.visitable_count();
        Ok((v - uavs).div_ceil(uavs) as u32)
    }

    /// Epoch budget of one simulation: twice the theoretical minimum.
    pub fn max_epochs(&self, uavs: usize) -> Result<u32, MapError> {
        Ok(2 * self.theoretical_min_epochs(uavs)?)
    }

    /// Precomputed cell index and move table.
    pub fn topology(&self) -> Topology {
        Topology::new(self)
    }
}

impl fmt::Display for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Dense lookup tables over the visitable cells of one map.
#[derive(Debug, Clone)]
pub struct Topology {
    cells: Vec<Coord>,
    index: Vec<Option<usize>>,
    moves: Vec<Vec<(Direction, usize)>>,
    cols: usize,
}

impl Topology {
    fn new(map: &GridMap) -> Self {
        let cells = map.visitable_cells();
        let mut index = vec![None; map.rows * map.cols];
        for (i, c) in cells.iter().enumerate() {
            index[c.row * map.cols + c.col] = Some(i);
        }
        let moves = cells
            .iter()
            .map(|&c| {
                Direction::ALL
                    .into_iter()
                    .filter_map(|d| {
                        let n = c.step(d).filter(|&n| map.is_visitable(n))?;
                        Some((
                            d,
                            index[n.row * map.cols + n.col].expect("free cell indexed"),
                        ))
                    })
                    .collect()
            })
            .collect();
        Self {
            cells,
            index,
            moves,
            cols: map.cols,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn coord(&self, index: usize) -> Coord {
        self.cells[index]
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        if c.col >= self.cols {
            return None;
        }
        self.index.get(c.row * self.cols + c.col).copied().flatten()
    }

    /// Feasible moves from cell `index` with the index of each target cell.
    pub fn moves(&self, index: usize) -> &[(Direction, usize)] {
        &self.moves[index]
    }
}

// Maps 2 to 5 are reconstructions: sizes and obstacle counts match the
// reference benchmark, layouts were chosen so that a single UAV cannot cover
// them (parity imbalance or two dead-end cells) while the UAV count at which
// coverage first becomes possible has an explicit disjoint-path witness.
const MAP1: &str = "7 7
.......
.......
.......
.......
.......
.......
.......
";

const MAP2: &str = "5 5
.....
.#.#.
.....
.#.#.
.....
";

const MAP3: &str = "6 6
..##..
..###.
..#...
#..#..
......
......
";

const MAP4: &str = "7 7
.......
.....#.
.....##
...####
...#.##
.......
.......
";

const MAP5: &str = "8 8
........
........
........
.####...
####....
.#####..
........
........
";

const MAP6: &str = "9 9
.........
...###...
....#....
.#..#..#.
.#######.
.#..#..#.
....#....
...###...
.........
";

/// Names and map-file text of the built-in maps, in order.
pub const BUILTIN_MAP_TEXT: [(&str, &str); 6] = [
    ("map1", MAP1),
    ("map2", MAP2),
    ("map3", MAP3),
    ("map4", MAP4),
    ("map5", MAP5),
    ("map6", MAP6),
];

/// The six built-in maps, `map1` through `map6`.
pub fn builtin_maps() -> Vec<GridMap> {
    BUILTIN_MAP_TEXT
        .iter()
        .map(|(name, text)| GridMap::parse(*name, text).expect("built-in map is valid"))
        .collect()
}

/// Looks up a built-in map by name (`map1`..`map6`).
pub fn builtin(name: &str) -> Option<GridMap> {
    BUILTIN_MAP_TEXT
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| GridMap::parse(*n, text).expect("built-in map is valid"))
}
