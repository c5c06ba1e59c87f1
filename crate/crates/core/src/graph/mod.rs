//! Windowed transaction networks and the activity, supply and count series
//! derived from an archive. These are the inputs every metric consumes.

mod activity;
mod counts;
mod series;
mod supply;

pub use activity::{active_accounts, birth_dates, ActivityReport, Cohort, CohortSet};
pub use counts::tx_counts_by_category;
pub use series::MetricSeries;
pub use supply::{released_supply, SupplyReport};

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use thiserror::Error;

use crate::model::{AccountId, EntityLabel, EntityLabelSet, TimeWindow, Transaction};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{metric} requires at least one account labeled {label}")]
    MissingLabel { metric: String, label: EntityLabel },
}

/// Undirected, simple transaction network for one time window.
///
/// Edge weight counts the transactions that produced the edge; degrees are
/// unweighted (number of distinct counterparties). There are no self-loops
/// and no isolated nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TxGraph {
    window: Option<TimeWindow>,
    adjacency: BTreeMap<AccountId, BTreeSet<AccountId>>,
    weights: BTreeMap<(AccountId, AccountId), u64>,
}

impl TxGraph {
    pub fn new(window: Option<TimeWindow>) -> Self {
        Self {
            window,
            adjacency: BTreeMap::new(),
            weights: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> Option<TimeWindow> {
        self.window
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains(&self, account: AccountId) -> bool {
        self.adjacency.contains_key(&account)
    }

    /// Number of distinct neighbors.
    pub fn degree(&self, account: AccountId) -> usize {
        self.adjacency.get(&account).map_or(0, BTreeSet::len)
    }

    pub fn nodes(&self) -> impl Iterator<Item = AccountId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn neighbors(&self, account: AccountId) -> impl Iterator<Item = AccountId> + '_ {
        self.adjacency
            .get(&account)
            .into_iter()
            .flat_map(|set| set.iter().copied())
    }

    /// Edges as `(low, high, weight)` in deterministic order.
    pub fn edges(&self) -> impl Iterator<Item = (AccountId, AccountId, u64)> + '_ {
        self.weights.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    /// Unweighted degree sequence, ordered by account id.
    pub fn degree_sequence(&self) -> Vec<u64> {
        self.adjacency.values().map(|n| n.len() as u64).collect()
    }

    pub fn add_edge(&mut self, a: AccountId, b: AccountId) {
        assert_ne!(a, b, "self-loops are not representable");
        let key = if a < b { (a, b) } else { (b, a) };
        *self.weights.entry(key).or_insert(0) += 1;
        self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
    }

    /// Copy of the graph with the given accounts (and any edges touching
    /// them) removed. Nodes left isolated by the removal are dropped too.
    pub fn without_nodes(&self, removed: &BTreeSet<AccountId>) -> TxGraph {
        let mut out = TxGraph::new(self.window);
        for (&(a, b), &w) in &self.weights {
            if removed.contains(&a) || removed.contains(&b) {
                continue;
            }
            out.weights.insert((a, b), w);
            out.adjacency.entry(a).or_default().insert(b);
            out.adjacency.entry(b).or_default().insert(a);
        }
        out
    }

    /// Plain-text edge list, one `<acct> <acct> <weight>` per line.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (a, b, w) in self.edges() {
            writeln!(out, "{a} {b} {w}")?;
        }
        Ok(())
    }
}

/// How transactions map onto graph edges.
#[derive(Debug, Clone)]
pub struct GraphBuildOptions {
    /// Include transactions whose result is not success. Off by default:
    /// failed transactions carry fee legs only.
    pub include_failed: bool,
    /// Accounts with these labels never become graph nodes. Fee collectors
    /// would otherwise connect to nearly everything.
    pub exclude_labels: BTreeSet<EntityLabel>,
}

impl Default for GraphBuildOptions {
    fn default() -> Self {
        Self {
            include_failed: false,
            exclude_labels: [EntityLabel::FeeAccount, EntityLabel::StakingReward]
                .into_iter()
                .collect(),
        }
    }
}

impl GraphBuildOptions {
    /// No label-based exclusions; useful for comparing both edge-rule
    /// variants.
    pub fn without_exclusions() -> Self {
        Self {
            include_failed: false,
            exclude_labels: BTreeSet::new(),
        }
    }
}

/// Builds the transaction network for one window.
///
/// Within each qualifying transaction, transfer legs are netted per account;
/// every net payer is connected to every net receiver. The result does not
/// depend on the order of the input transactions.
pub fn build_graph<'a, I, F>(
    transactions: I,
    window: TimeWindow,
    labels: &EntityLabelSet,
    options: &GraphBuildOptions,
    filter: F,
) -> TxGraph
where
    I: IntoIterator<Item = &'a Transaction>,
    F: Fn(&Transaction) -> bool,
{
    let mut graph = TxGraph::new(Some(window));
    for tx in transactions {
        if !window.contains(tx.consensus_timestamp) {
            continue;
        }
        if !options.include_failed && !tx.is_success() {
            continue;
        }
        if !filter(tx) {
            continue;
        }
        let mut net: BTreeMap<AccountId, i128> = BTreeMap::new();
        for leg in &tx.transfers {
            if options.exclude_labels.contains(&labels.label_of(leg.account)) {
                continue;
            }
            *net.entry(leg.account).or_insert(0) += leg.amount as i128;
        }
        let senders: Vec<AccountId> = net
            .iter()
            .filter(|&(_, &v)| v < 0)
            .map(|(&a, _)| a)
            .collect();
        let receivers: Vec<AccountId> = net
            .iter()
            .filter(|&(_, &v)| v > 0)
            .map(|(&a, _)| a)
            .collect();
        for &s in &senders {
            for &r in &receivers {
                graph.add_edge(s, r);
            }
        }
    }
    graph
}
