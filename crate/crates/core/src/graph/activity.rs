//! Account birth dates, early-user cohorts and daily activity series.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::MetricSeries;
use crate::model::{AccountId, Timestamp, Transaction, NANOS_PER_DAY};

/// Account groups by the age of their first transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cohort {
    /// First transaction within the first 30 days of the analysis period.
    EarlyUsers1M,
    /// First transaction within the first 365 days.
    EarlyUsers1Y,
    All,
}

impl Cohort {
    fn age_cutoff_nanos(self) -> Option<i64> {
        match self {
            Cohort::EarlyUsers1M => Some(30 * NANOS_PER_DAY),
            Cohort::EarlyUsers1Y => Some(365 * NANOS_PER_DAY),
            Cohort::All => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CohortSet {
    pub cohort: Cohort,
    pub members: BTreeSet<AccountId>,
}

impl CohortSet {
    /// Members of `cohort` given the first-transaction time of every account
    /// and the start of the analysis period.
    pub fn build(
        cohort: Cohort,
        births: &BTreeMap<AccountId, Timestamp>,
        period_start: Timestamp,
    ) -> Self {
        let members = match cohort.age_cutoff_nanos() {
            None => births.keys().copied().collect(),
            Some(cutoff) => births
                .iter()
                .filter(|(_, born)| born.nanos() < period_start.nanos() + cutoff)
                .map(|(&a, _)| a)
                .collect(),
        };
        Self { cohort, members }
    }

    pub fn contains(&self, account: AccountId) -> bool {
        self.members.contains(&account)
    }
}

/// First timestamp at which each account appears in any transfers list,
/// successful or not. Order of the input does not matter.
pub fn birth_dates<'a, I>(transactions: I) -> BTreeMap<AccountId, Timestamp>
where
    I: IntoIterator<Item = &'a Transaction>,
{
    let mut births: BTreeMap<AccountId, Timestamp> = BTreeMap::new();
    for tx in transactions {
        for leg in &tx.transfers {
            births
                .entry(leg.account)
                .and_modify(|t| *t = (*t).min(tx.consensus_timestamp))
                .or_insert(tx.consensus_timestamp);
        }
    }
    births
}

/// The three panels of the daily-activity figure.
#[derive(Debug, Clone)]
pub struct ActivityReport {
    /// Distinct cohort accounts appearing in at least one successful
    /// transaction that day.
    pub active: MetricSeries,
    /// Active accounts as a percentage of the cohort accounts born so far.
    pub pct_of_cumulative: MetricSeries,
    /// Cohort accounts born up to and including the day.
    pub cumulative: MetricSeries,
}

/// Daily activity over the whole archive for one cohort. Days without any
/// transaction count as zero active accounts, so the series is gapless.
pub fn active_accounts<'a, I>(
    transactions: I,
    cohort: &CohortSet,
    births: &BTreeMap<AccountId, Timestamp>,
) -> ActivityReport
where
    I: IntoIterator<Item = &'a Transaction>,
{
    let mut per_day: BTreeMap<i64, BTreeSet<AccountId>> = BTreeMap::new();
    for tx in transactions {
        if !tx.is_success() {
            continue;
        }
        let day = tx.consensus_timestamp.day_floor().nanos();
        let actives = per_day.entry(day).or_default();
        for leg in &tx.transfers {
            if cohort.contains(leg.account) {
                actives.insert(leg.account);
            }
        }
    }

    let suffix = match cohort.cohort {
        Cohort::EarlyUsers1M => "early1m",
        Cohort::EarlyUsers1Y => "early1y",
        Cohort::All => "all",
    };
    let mut report = ActivityReport {
        active: MetricSeries::new(format!("active_accounts/{suffix}")),
        pct_of_cumulative: MetricSeries::new(format!("active_pct_of_cumulative/{suffix}")),
        cumulative: MetricSeries::new(format!("cumulative_accounts/{suffix}")),
    };
    let (Some(&first_day), Some(&last_day)) = (per_day.keys().next(), per_day.keys().last())
    else {
        return report;
    };

    // Cohort births bucketed by day for the cumulative panel.
    let mut born_on: BTreeMap<i64, u64> = BTreeMap::new();
    for (account, born) in births {
        if cohort.contains(*account) {
            *born_on.entry(born.day_floor().nanos()).or_insert(0) += 1;
        }
    }
    let mut cumulative: u64 = born_on
        .range(..first_day)
        .map(|(_, n)| n)
        .sum();

    let mut day = first_day;
    while day <= last_day {
        cumulative += born_on.get(&day).copied().unwrap_or(0);
        let active = per_day.get(&day).map_or(0, BTreeSet::len) as u64;
        let ts = Timestamp::from_nanos(day);
        report.active.push(ts, active as f64);
        report.cumulative.push(ts, cumulative as f64);
        if cumulative > 0 {
            report
                .pct_of_cumulative
                .push(ts, 100.0 * active as f64 / cumulative as f64);
        }
        day += NANOS_PER_DAY;
    }
    report
}
