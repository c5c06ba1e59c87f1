//! Canonical domain types shared by the ingestion, graph, metric and
//! reporting layers. No I/O and no metric logic lives here.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

/// Minimal currency units (tinybars) per whole HBAR.
pub const TINYBARS_PER_HBAR: i64 = 100_000_000;

/// Maximum supply: 50 billion HBAR, in tinybars.
pub const MAX_SUPPLY_TINYBARS: u64 = 50_000_000_000 * TINYBARS_PER_HBAR as u64;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid account id `{text}`: {reason}")]
    InvalidAccountId { text: String, reason: String },
    #[error("invalid timestamp `{text}`: {reason}")]
    InvalidTimestamp { text: String, reason: String },
    #[error("transfer amounts sum to {residual} tinybars, expected 0")]
    UnbalancedTransfers { residual: i128 },
    #[error("snapshot total {total} tinybars exceeds the maximum supply")]
    SupplyCapExceeded { total: u128 },
    #[error("invalid time window: start {start} is not before end {end}")]
    EmptyWindow { start: Timestamp, end: Timestamp },
    #[error("label file line {line}: {reason}")]
    LabelFile { line: usize, reason: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Ledger account identifier, `shard.realm.num` in text form.
///
/// Ordering is lexicographic on (shard, realm, num), which matches the
/// numeric order used everywhere a deterministic account order is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AccountId {
    pub shard: u64,
    pub realm: u64,
    pub num: u64,
}

impl AccountId {
    pub const fn new(shard: u64, realm: u64, num: u64) -> Self {
        Self { shard, realm, num }
    }
}

impl fmt::Display for AccountId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.shard, self.realm, self.num)
    }
}

fn parse_id_part(text: &str, part: &str, whole: &str) -> Result<u64, ModelError> {
    if part.is_empty() {
        return Err(ModelError::InvalidAccountId {
            text: whole.to_string(),
            reason: "empty component".to_string(),
        });
    }
    if part.len() > 1 && part.starts_with('0') {
        return Err(ModelError::InvalidAccountId {
            text: whole.to_string(),
            reason: format!("leading zero in `{part}`"),
        });
    }
    part.parse::<u64>().map_err(|_| ModelError::InvalidAccountId {
        text: text.to_string(),
        reason: format!("`{part}` is not a non-negative integer"),
    })
}

impl FromStr for AccountId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('.');
        let (a, b, c) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c), None) => (a, b, c),
            _ => {
                return Err(ModelError::InvalidAccountId {
                    text: s.to_string(),
                    reason: "expected three dot-separated components".to_string(),
                })
            }
        };
        Ok(AccountId {
            shard: parse_id_part(s, a, s)?,
            realm: parse_id_part(s, b, s)?,
            num: parse_id_part(s, c, s)?,
        })
    }
}

impl Serialize for AccountId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AccountId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Nanosecond-precision epoch time; the wire form is `"seconds.nanoseconds"`
/// with a nine-digit fractional part.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

pub const NANOS_PER_SEC: i64 = 1_000_000_000;
pub const NANOS_PER_DAY: i64 = 86_400 * NANOS_PER_SEC;
pub const NANOS_PER_WEEK: i64 = 7 * NANOS_PER_DAY;

impl Timestamp {
    pub const fn from_nanos(nanos: i64) -> Self {
        Self(nanos)
    }

    pub fn from_parts(secs: i64, subsec_nanos: u32) -> Self {
        Self(secs * NANOS_PER_SEC + subsec_nanos as i64)
    }

    /// Midnight UTC of the given calendar date.
    pub fn from_date(year: i32, month: u32, day: u32) -> Self {
        let date = chrono::NaiveDate::from_ymd_opt(year, month, day)
            .expect("valid calendar date")
            .and_hms_opt(0, 0, 0)
            .expect("midnight exists");
        Self(date.and_utc().timestamp() * NANOS_PER_SEC)
    }

    pub const fn nanos(self) -> i64 {
        self.0
    }

    pub fn secs(self) -> i64 {
        self.0.div_euclid(NANOS_PER_SEC)
    }

    pub fn subsec_nanos(self) -> u32 {
        self.0.rem_euclid(NANOS_PER_SEC) as u32
    }

    /// Midnight UTC of the day this instant falls in.
    pub fn day_floor(self) -> Self {
        Self(self.0.div_euclid(NANOS_PER_DAY) * NANOS_PER_DAY)
    }

    pub fn to_datetime(self) -> chrono::DateTime<chrono::Utc> {
        chrono::DateTime::from_timestamp(self.secs(), self.subsec_nanos())
            .expect("timestamp within chrono range")
    }

    /// `YYYY-MM-DD` of the UTC day, used in report tables.
    pub fn date_string(self) -> String {
        self.to_datetime().format("%Y-%m-%d").to_string()
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:09}", self.secs(), self.subsec_nanos())
    }
}

impl FromStr for Timestamp {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ModelError::InvalidTimestamp {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let (sec_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        let secs: i64 = sec_part.parse().map_err(|_| err("bad seconds"))?;
        if secs < 0 {
            return Err(err("negative seconds"));
        }
        let nanos = if frac_part.is_empty() {
            0
        } else {
            if frac_part.len() > 9 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("fractional part must be 1-9 digits"));
            }
            let parsed: u32 = frac_part.parse().map_err(|_| err("bad fraction"))?;
            parsed * 10u32.pow(9 - frac_part.len() as u32)
        };
        Ok(Timestamp::from_parts(secs, nanos))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// One balance-changing leg of a transaction. Zero-amount legs are dropped
/// when a transaction is read, so `amount != 0` holds everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub account: AccountId,
    /// Signed change in tinybars; negative for the paying side.
    pub amount: i64,
}

/// One consensus-ordered ledger event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub consensus_timestamp: Timestamp,
    /// Transaction-type tag, e.g. `CRYPTOTRANSFER` or `CONSENSUSSUBMITMESSAGE`.
    pub name: String,
    /// Outcome tag; `SUCCESS` marks a successful transaction.
    pub result: String,
    #[serde(deserialize_with = "drop_zero_legs")]
    pub transfers: Vec<Transfer>,
}

fn drop_zero_legs<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Transfer>, D::Error> {
    let legs = Vec::<Transfer>::deserialize(d)?;
    Ok(legs.into_iter().filter(|t| t.amount != 0).collect())
}

pub const RESULT_SUCCESS: &str = "SUCCESS";

impl Transaction {
    pub fn is_success(&self) -> bool {
        self.result == RESULT_SUCCESS
    }

    /// Signed sum of all transfer legs.
    pub fn transfer_sum(&self) -> i128 {
        self.transfers.iter().map(|t| t.amount as i128).sum()
    }
}

/// Checks transaction invariants and canonicalizes transfer order.
///
/// In lenient mode an unbalanced transaction passes through with a warning
/// counted; strict mode rejects it with the residual amount.
#[derive(Debug, Default)]
pub struct TxValidator {
    pub strict_zero_sum: bool,
    pub zero_sum_violations: u64,
}

impl TxValidator {
    pub fn new(strict_zero_sum: bool) -> Self {
        Self {
            strict_zero_sum,
            zero_sum_violations: 0,
        }
    }

    pub fn validate(&mut self, mut tx: Transaction) -> Result<Transaction, ModelError> {
        let residual = tx.transfer_sum();
        if residual != 0 {
            if self.strict_zero_sum {
                return Err(ModelError::UnbalancedTransfers { residual });
            }
            self.zero_sum_violations += 1;
            log::warn!(
                "transaction at {} has transfer residual of {residual} tinybars",
                tx.consensus_timestamp
            );
        }
        tx.transfers.sort_by_key(|t| (t.account, t.amount));
        Ok(tx)
    }
}

/// Account-to-balance map at one instant. Balances are tinybars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WireSnapshot", into = "WireSnapshot")]
pub struct BalanceSnapshot {
    timestamp: Timestamp,
    balances: BTreeMap<AccountId, u64>,
}

#[derive(Serialize, Deserialize)]
struct WireSnapshot {
    timestamp: Timestamp,
    balances: Vec<WireBalance>,
}

#[derive(Serialize, Deserialize)]
struct WireBalance {
    account: AccountId,
    balance: u64,
}

impl TryFrom<WireSnapshot> for BalanceSnapshot {
    type Error = ModelError;

    fn try_from(wire: WireSnapshot) -> Result<Self, ModelError> {
        let balances = wire
            .balances
            .into_iter()
            .map(|b| (b.account, b.balance))
            .collect();
        BalanceSnapshot::new(wire.timestamp, balances)
    }
}

impl From<BalanceSnapshot> for WireSnapshot {
    fn from(s: BalanceSnapshot) -> Self {
        WireSnapshot {
            timestamp: s.timestamp,
            balances: s
                .balances
                .into_iter()
                .map(|(account, balance)| WireBalance { account, balance })
                .collect(),
        }
    }
}

impl BalanceSnapshot {
    pub fn new(
        timestamp: Timestamp,
        balances: BTreeMap<AccountId, u64>,
    ) -> Result<Self, ModelError> {
        let total: u128 = balances.values().map(|&b| b as u128).sum();
        if total > MAX_SUPPLY_TINYBARS as u128 {
            return Err(ModelError::SupplyCapExceeded { total });
        }
        Ok(Self {
            timestamp,
            balances,
        })
    }

    pub fn timestamp(&self) -> Timestamp {
        self.timestamp
    }

    pub fn balances(&self) -> &BTreeMap<AccountId, u64> {
        &self.balances
    }

    pub fn total_tinybars(&self) -> u128 {
        self.balances.values().map(|&b| b as u128).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cadence {
    Daily,
    Weekly,
}

impl Cadence {
    pub const fn len_nanos(self) -> i64 {
        match self {
            Cadence::Daily => NANOS_PER_DAY,
            Cadence::Weekly => NANOS_PER_WEEK,
        }
    }
}

impl fmt::Display for Cadence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cadence::Daily => write!(f, "daily"),
            Cadence::Weekly => write!(f, "weekly"),
        }
    }
}

/// Half-open analysis window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: Timestamp,
    pub end: Timestamp,
    pub cadence: Cadence,
}

impl TimeWindow {
    pub fn new(start: Timestamp, end: Timestamp, cadence: Cadence) -> Result<Self, ModelError> {
        if start >= end {
            return Err(ModelError::EmptyWindow { start, end });
        }
        Ok(Self {
            start,
            end,
            cadence,
        })
    }

    pub fn contains(&self, ts: Timestamp) -> bool {
        ts >= self.start && ts < self.end
    }

    /// Gapless windows covering `[range_start, range_end)`, anchored so that
    /// window boundaries fall at `anchor + k * cadence`.
    pub fn tile(
        range_start: Timestamp,
        range_end: Timestamp,
        cadence: Cadence,
        anchor: Timestamp,
    ) -> Vec<TimeWindow> {
        if range_start >= range_end {
            return Vec::new();
        }
        let len = cadence.len_nanos();
        let offset = (range_start.nanos() - anchor.nanos()).div_euclid(len);
        let mut start = anchor.nanos() + offset * len;
        let mut windows = Vec::new();
        while start < range_end.nanos() {
            windows.push(TimeWindow {
                start: Timestamp::from_nanos(start),
                end: Timestamp::from_nanos(start + len),
                cadence,
            });
            start += len;
        }
        windows
    }
}

/// Entity category attached to an account.
///
/// The numeric ids behind each category are deployment configuration, not
/// ledger data, so they arrive via a label file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityLabel {
    Treasury,
    HbarFoundation,
    Swirlds,
    FeeAccount,
    StakingReward,
    Other,
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EntityLabel::Treasury => "Treasury",
            EntityLabel::HbarFoundation => "HbarFoundation",
            EntityLabel::Swirlds => "Swirlds",
            EntityLabel::FeeAccount => "FeeAccount",
            EntityLabel::StakingReward => "StakingReward",
            EntityLabel::Other => "Other",
        };
        write!(f, "{name}")
    }
}

impl FromStr for EntityLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        match folded.as_str() {
            "treasury" => Ok(EntityLabel::Treasury),
            "hbarfoundation" => Ok(EntityLabel::HbarFoundation),
            "swirlds" => Ok(EntityLabel::Swirlds),
            "feeaccount" => Ok(EntityLabel::FeeAccount),
            "stakingreward" => Ok(EntityLabel::StakingReward),
            "other" => Ok(EntityLabel::Other),
            _ => Err(format!("unknown label `{s}`")),
        }
    }
}

/// Account-to-category map. Accounts absent from the map are `Other`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityLabelSet {
    labels: BTreeMap<AccountId, EntityLabel>,
}

impl EntityLabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, account: AccountId, label: EntityLabel) {
        self.labels.insert(account, label);
    }

    pub fn label_of(&self, account: AccountId) -> EntityLabel {
        self.labels
            .get(&account)
            .copied()
            .unwrap_or(EntityLabel::Other)
    }

    /// `Public` per the reporting convention: everything that is neither
    /// Treasury nor HbarFoundation.
    pub fn is_public(&self, account: AccountId) -> bool {
        !matches!(
            self.label_of(account),
            EntityLabel::Treasury | EntityLabel::HbarFoundation
        )
    }

    pub fn accounts_with(&self, label: EntityLabel) -> impl Iterator<Item = AccountId> + '_ {
        self.labels
            .iter()
            .filter(move |(_, l)| **l == label)
            .map(|(a, _)| *a)
    }

    pub fn has_label(&self, label: EntityLabel) -> bool {
        self.labels.values().any(|l| *l == label)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Parses the plain-text label table: one `<account-id> <label>` pair per
    /// line, `#` starts a comment, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut set = EntityLabelSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (id_text, label_text) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(ModelError::LabelFile {
                        line: idx + 1,
                        reason: "expected `<account-id> <label>`".to_string(),
                    })
                }
            };
            let account: AccountId = id_text.parse().map_err(|e| ModelError::LabelFile {
                line: idx + 1,
                reason: format!("{e}"),
            })?;
            let label: EntityLabel = label_text.parse().map_err(|e| ModelError::LabelFile {
                line: idx + 1,
                reason: e,
            })?;
            set.insert(account, label);
        }
        Ok(set)
    }

    pub fn from_path(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}
