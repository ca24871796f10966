//! Game-log ingestion, pairwise aggregation and the identifiability check.

use std::collections::HashMap;
use std::io::Read;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

/// A single head-to-head result. Ties are not representable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameRecord {
    pub winner: String,
    pub loser: String,
    /// Optional third column (typically a date); carried through untouched.
    pub tag: Option<String>,
}

impl GameRecord {
    pub fn new(winner: impl Into<String>, loser: impl Into<String>) -> Result<Self, DataError> {
        let winner = winner.into();
        let loser = loser.into();
        if winner == loser {
            return Err(DataError::SelfComparison { line: 0, team: winner });
        }
        Ok(Self {
            winner,
            loser,
            tag: None,
        })
    }
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("input contains no games")]
    Empty,
    #[error("line {line}: bad header, expected `winner,loser[,date]`, found `{found}`")]
    BadHeader { line: u64, found: String },
    #[error("line {line}: expected 2 or 3 columns, found {found}")]
    ColumnCount { line: u64, found: usize },
    #[error("line {line}: empty team identifier")]
    EmptyTeam { line: u64 },
    #[error("line {line}: team `{team}` recorded as playing itself")]
    SelfComparison { line: u64, team: String },
    #[error("line {line}: {source}")]
    Csv {
        line: u64,
        #[source]
        source: csv::Error,
    },
    #[error("win matrix is not square or has a nonzero diagonal")]
    BadMatrix,
}

/// Parse a `winner,loser[,date]` CSV game log (UTF-8, LF or CRLF).
///
/// Line numbers in errors are 1-based and count the header.
pub fn load_games<R: Read>(source: R) -> Result<Vec<GameRecord>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(DataError::Empty),
        Some(r) => r.map_err(|source| DataError::Csv { line: 1, source })?,
    };
    let line_of = |rec: &csv::StringRecord, fallback: u64| {
        rec.position().map(|p| p.line()).unwrap_or(fallback)
    };
    let cols: Vec<String> = header.iter().map(|c| c.trim_start_matches('\u{feff}').to_ascii_lowercase()).collect();
    let header_ok = matches!(cols.len(), 2 | 3) && cols[0] == "winner" && cols[1] == "loser";
    if !header_ok {
        return Err(DataError::BadHeader {
            line: line_of(&header, 1),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut games = Vec::new();
    for (k, rec) in records.enumerate() {
        let fallback = k as u64 + 2;
        let rec = rec.map_err(|source| DataError::Csv { line: fallback, source })?;
        let line = line_of(&rec, fallback);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if !matches!(rec.len(), 2 | 3) {
            return Err(DataError::ColumnCount { line, found: rec.len() });
        }
        let (winner, loser) = (&rec[0], &rec[1]);
        if winner.is_empty() || loser.is_empty() {
            return Err(DataError::EmptyTeam { line });
        }
        if winner == loser {
            return Err(DataError::SelfComparison {
                line,
                team: winner.to_string(),
            });
        }
        games.push(GameRecord {
            winner: winner.to_string(),
            loser: loser.to_string(),
            tag: rec.get(2).filter(|t| !t.is_empty()).map(str::to_string),
        });
    }
    if games.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(games)
}

/// Square matrix of nonnegative counts stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountMatrix {
    size: usize,
    cells: Vec<u64>,
}

impl CountMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            cells: vec![0; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.size + j]
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, by: u64) {
        self.cells[i * self.size + j] += by;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.size.max(1))
    }
}

/// Pairwise aggregate of a game log.
///
/// `wins(i, j)` is the number of times team `i` beat team `j`;
/// `games(i, j) = wins(i, j) + wins(j, i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCounts {
    teams: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    games: CountMatrix,
    wins: CountMatrix,
    total: u64,
}

impl PairCounts {
    /// Build from a win matrix. Team names default to `T0, T1, ...` when `teams` is `None`.
    pub fn from_wins(teams: Option<Vec<String>>, wins: &[Vec<u64>]) -> Result<Self, DataError> {
        let m = wins.len();
        if wins.iter().any(|row| row.len() != m) || (0..m).any(|i| wins[i][i] != 0) {
            return Err(DataError::BadMatrix);
        }
        let teams = match teams {
            Some(t) if t.len() == m => t,
            Some(_) => return Err(DataError::BadMatrix),
            None => (0..m).map(|i| format!("T{i}")).collect(),
        };
        let mut w = CountMatrix::zeros(m);
        for (i, row) in wins.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                w.add(i, j, x);
            }
        }
        Ok(Self::assemble(teams, w))
    }

    fn assemble(teams: Vec<String>, wins: CountMatrix) -> Self {
        let m = teams.len();
        let mut games = CountMatrix::zeros(m);
        let mut total = 0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    games.add(i, j, wins.get(i, j) + wins.get(j, i));
                    if i < j {
                        total += wins.get(i, j) + wins.get(j, i);
                    }
                }
            }
        }
        let index = teams.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Self {
            teams,
            index,
            games,
            wins,
            total,
        }
    }

    /// Number of teams, `m`.
    pub fn num_teams(&self) -> usize {
        self.teams.len()
    }

    /// Number of unordered team pairs, `m(m-1)/2`.
    pub fn num_pairs(&self) -> usize {
        let m = self.num_teams();
        m * m.saturating_sub(1) / 2
    }

    /// Total number of games, `N`.
    pub fn total_games(&self) -> u64 {
        self.total
    }

    pub fn teams(&self) -> &[String] {
        &self.teams
    }

    pub fn team_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn games(&self, i: usize, j: usize) -> u64 {
        self.games.get(i, j)
    }

    #[inline]
    pub fn wins(&self, i: usize, j: usize) -> u64 {
        self.wins.get(i, j)
    }

    pub fn win_matrix(&self) -> &CountMatrix {
        &self.wins
    }

    pub fn game_matrix(&self) -> &CountMatrix {
        &self.games
    }

    /// Total wins of team `i`.
    pub fn team_wins(&self, i: usize) -> u64 {
        (0..self.num_teams()).map(|j| self.wins(i, j)).sum()
    }

    /// Total games played by team `i`.
    pub fn team_games(&self, i: usize) -> u64 {
        (0..self.num_teams()).map(|j| self.games(i, j)).sum()
    }

    /// The same games with every result reversed: `wins'(i, j) = wins(j, i)`.
    pub fn reversed(&self) -> Self {
        let m = self.num_teams();
        let mut w = CountMatrix::zeros(m);
        for i in 0..m {
            for j in 0..m {
                w.add(i, j, self.wins(j, i));
            }
        }
        Self::assemble(self.teams.clone(), w)
    }
}

/// Aggregate games into pairwise counts. Teams are indexed by first appearance.
pub fn aggregate(games: &[GameRecord]) -> Result<PairCounts, DataError> {
    if games.is_empty() {
        return Err(DataError::Empty);
    }
    let mut teams: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for g in games {
        for name in [&g.winner, &g.loser] {
            if !index.contains_key(name.as_str()) {
                index.insert(name, teams.len());
                teams.push(name.clone());
            }
        }
    }
    let mut wins = CountMatrix::zeros(teams.len());
    for g in games {
        if g.winner == g.loser {
            return Err(DataError::SelfComparison {
                line: 0,
                team: g.winner.clone(),
            });
        }
        wins.add(index[g.winner.as_str()], index[g.loser.as_str()], 1);
    }
    Ok(PairCounts::assemble(teams, wins))
}

/// Outcome of the connectivity (Ford) check on the win digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    Connected,
    /// The digraph with an edge `i -> j` whenever `i` beat `j` is not strongly
    /// connected.
    Violated(ConnectivityWitness),
}

impl Connectivity {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectivity::Connected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityWitness {
    /// Strongly connected components (team indices, each sorted ascending),
    /// ordered by their smallest member.
    pub components: Vec<Vec<usize>>,
    /// A component no outside team has ever beaten. Splitting the league into
    /// this set and the rest violates the partition condition.
    pub unbeaten: Vec<usize>,
}

impl ConnectivityWitness {
    pub fn describe(&self, teams: &[String]) -> String {
        let fmt = |c: &Vec<usize>| {
            let names: Vec<&str> = c.iter().map(|&i| teams[i].as_str()).collect();
            format!("{{{}}}", names.join(","))
        };
        let parts: Vec<String> = self.components.iter().map(fmt).collect();
        format!(
            "components {}; nobody outside {} ever beat a member",
            parts.join(" "),
            fmt(&self.unbeaten)
        )
    }
}

/// Check that every bipartition of the teams has a cross-partition win in
/// each direction, i.e. that the win digraph is strongly connected.
pub fn check_connectivity(counts: &PairCounts) -> Connectivity {
    let m = counts.num_teams();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(m, 0);
    let nodes: Vec<_> = (0..m).map(|_| graph.add_node(())).collect();
    for i in 0..m {
        for j in 0..m {
            if i != j && counts.wins(i, j) > 0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    if sccs.len() <= 1 {
        return Connectivity::Connected;
    }

    let mut components: Vec<Vec<usize>> = sccs
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    components.sort_by_key(|c| c[0]);

    let mut comp_of = vec![0usize; m];
    for (k, c) in components.iter().enumerate() {
        for &i in c {
            comp_of[i] = k;
        }
    }
    // A component with no incoming edge from outside always exists in a DAG of components.
    let mut beaten_from_outside = vec![false; components.len()];
    for i in 0..m {
        for j in 0..m {
            if i != j && counts.wins(i, j) > 0 && comp_of[i] != comp_of[j] {
                beaten_from_outside[comp_of[j]] = true;
            }
        }
    }
    let source = beaten_from_outside
        .iter()
        .position(|b| !b)
        .expect("condensation of a finite digraph has a source");
    let unbeaten = components[source].clone();
    Connectivity::Violated(ConnectivityWitness {
        components,
        unbeaten,
    })
}
