//! Watched-literal clause database used for AT/RAT checks.
//!
//! Every check starts from the empty assignment and undoes itself afterwards, so the
//! two-watch invariant never needs repair: under the empty assignment any two distinct
//! literals of a clause are valid watches.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::clause::Clause;
use crate::lit::Literal;

pub(crate) type ClauseId = usize;

struct Stored {
    lits: Vec<Literal>,
    alive: bool,
}

/// Why propagation stopped with a conflict.
#[derive(Debug)]
pub(crate) struct Conflict {
    /// Clause ids in the implication graph of the conflict, ascending. Only filled when
    /// dependency tracing was requested.
    pub deps: Vec<ClauseId>,
}

pub(crate) struct Engine {
    clauses: Vec<Stored>,
    live: BTreeMap<Clause, Vec<ClauseId>>,
    watches: Vec<Vec<ClauseId>>,
    units: Vec<ClauseId>,
    empties: Vec<ClauseId>,
    // Per variable: 0 unassigned, 1 true, -1 false.
    values: Vec<i8>,
    reasons: Vec<Option<ClauseId>>,
    trail: Vec<Literal>,
    /// Per clause id: needed by the proof being trimmed.
    core: Vec<bool>,
    /// Propagate through core clauses before any other clause.
    core_first: bool,
    pub propagations: u64,
}

/// Outcome of visiting the watchers of one falsified literal.
enum Scan {
    Conflict(ClauseId),
    Implied,
    Exhausted,
}

const TRUE: i8 = 1;
const FALSE: i8 = -1;

impl Engine {
    pub fn new() -> Engine {
        Engine {
            clauses: Vec::new(),
            live: BTreeMap::new(),
            watches: Vec::new(),
            units: Vec::new(),
            empties: Vec::new(),
            values: Vec::new(),
            reasons: Vec::new(),
            trail: Vec::new(),
            core: Vec::new(),
            core_first: false,
            propagations: 0,
        }
    }

    pub fn set_core_first(&mut self, on: bool) {
        self.core_first = on;
    }

    pub fn mark_core(&mut self, id: ClauseId) {
        self.core[id] = true;
    }

    /// Number of clause instances ever inserted.
    pub fn instances(&self) -> usize {
        self.clauses.len()
    }

    fn ensure_literal(&mut self, l: Literal) {
        let var = l.var().index() as usize;
        if self.values.len() <= var {
            self.values.resize(var + 1, 0);
            self.reasons.resize(var + 1, None);
            self.watches.resize_with(2 * var + 2, Vec::new);
        }
    }

    fn value(values: &[i8], l: Literal) -> i8 {
        let v = values[l.var().index() as usize];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn insert(&mut self, clause: &Clause) -> ClauseId {
        for &l in clause.literals() {
            self.ensure_literal(l);
        }
        let id = self.clauses.len();
        let lits = clause.literals().to_vec();
        match lits.len() {
            0 => self.empties.push(id),
            1 => self.units.push(id),
            _ => {
                self.watches[lits[0].code()].push(id);
                self.watches[lits[1].code()].push(id);
            }
        }
        self.clauses.push(Stored { lits, alive: true });
        self.core.push(false);
        self.live.entry(clause.clone()).or_default().push(id);
        id
    }

    /// Takes back the insertion of instance `id`, which must be the most recent live
    /// instance of its clause.
    pub fn uninsert(&mut self, id: ClauseId) {
        let key = Clause::new(self.clauses[id].lits.iter().copied());
        let ids = self.live.get_mut(&key).expect("instance is live");
        let top = ids.pop();
        debug_assert_eq!(top, Some(id));
        if ids.is_empty() {
            self.live.remove(&key);
        }
        self.clauses[id].alive = false;
    }

    /// Undoes the removal of instance `id`.
    pub fn revive(&mut self, id: ClauseId) {
        let stored = &mut self.clauses[id];
        debug_assert!(!stored.alive);
        stored.alive = true;
        let lits = stored.lits.clone();
        match lits.len() {
            0 => self.empties.push(id),
            1 => self.units.push(id),
            _ => {
                // Stale entries may linger in both watch lists; a clause must be watched
                // at most once per literal.
                for w in [lits[0], lits[1]] {
                    let list = &mut self.watches[w.code()];
                    list.retain(|&x| x != id);
                    list.push(id);
                }
            }
        }
        let key = Clause::new(lits.iter().copied());
        self.live.entry(key).or_default().push(id);
    }

    /// Removes the most recently inserted live instance of `clause`.
    pub fn remove(&mut self, clause: &Clause) -> Option<ClauseId> {
        let ids = self.live.get_mut(clause)?;
        let id = ids.pop().expect("live entries are never empty");
        if ids.is_empty() {
            self.live.remove(clause);
        }
        self.clauses[id].alive = false;
        // Watch, unit and empty lists drop dead ids lazily.
        Some(id)
    }

    /// Distinct live clauses containing `l`, each with all of its live instances.
    pub fn live_containing(&self, l: Literal) -> Vec<(&Clause, &[ClauseId])> {
        self.live
            .iter()
            .filter(|(c, _)| c.contains(l))
            .map(|(c, ids)| (c, ids.as_slice()))
            .collect()
    }

    /// Asymmetric tautology check: do the unit negations of `clause` propagate to a
    /// conflict together with the live clauses?
    pub fn at(&mut self, clause: &[Literal], trace: bool) -> Option<Conflict> {
        for &l in clause {
            self.ensure_literal(l);
        }
        let conflict = self.propagate_under(clause, trace);
        self.reset();
        conflict
    }

    fn reset(&mut self) {
        for l in self.trail.drain(..) {
            let var = l.var().index() as usize;
            self.values[var] = 0;
            self.reasons[var] = None;
        }
    }

    fn conflict_from(&self, clause: Option<ClauseId>, falsified: &[Literal], trace: bool) -> Conflict {
        if !trace {
            return Conflict { deps: Vec::new() };
        }
        let mut deps: Vec<ClauseId> = clause.into_iter().collect();
        let mut seen = vec![false; self.values.len()];
        let mut stack: Vec<Literal> = falsified.to_vec();
        while let Some(l) = stack.pop() {
            let var = l.var().index() as usize;
            if seen[var] {
                continue;
            }
            seen[var] = true;
            if let Some(reason) = self.reasons[var] {
                deps.push(reason);
                stack.extend(self.clauses[reason].lits.iter().map(|&m| -m));
            }
        }
        deps.sort_unstable();
        deps.dedup();
        Conflict { deps }
    }

    fn assign(&mut self, l: Literal, reason: Option<ClauseId>) -> bool {
        let var = l.var().index() as usize;
        match Self::value(&self.values, l) {
            TRUE => true,
            FALSE => false,
            _ => {
                self.values[var] = if l.is_positive() { TRUE } else { FALSE };
                self.reasons[var] = reason;
                self.trail.push(l);
                true
            }
        }
    }

    fn propagate_under(&mut self, negated: &[Literal], trace: bool) -> Option<Conflict> {
        self.empties.retain(|&id| self.clauses[id].alive);
        if let Some(&id) = self.empties.first() {
            return Some(self.conflict_from(Some(id), &[], trace));
        }
        for &l in negated {
            if !self.assign(-l, None) {
                // The clause contains both l and -l.
                return Some(self.conflict_from(None, &[l, -l], trace));
            }
        }
        self.units.retain(|&id| self.clauses[id].alive);
        let core_first = self.core_first;
        for i in 0..self.units.len() {
            let id = self.units[i];
            if core_first && !self.core[id] {
                continue;
            }
            let l = self.clauses[id].lits[0];
            if !self.assign(l, Some(id)) {
                self.propagations += 1;
                return Some(self.conflict_from(Some(id), &[l], trace));
            }
        }

        if !core_first {
            for head in 0.. {
                if head >= self.trail.len() {
                    return None;
                }
                if let Scan::Conflict(id) = self.scan(head, false, false) {
                    return Some(self.clause_conflict(id, trace));
                }
            }
        }

        // Core clauses propagate to fixpoint; then a single implication from any other
        // clause, and back to the core.
        let (mut core_head, mut any_head, mut next_unit) = (0, 0, 0);
        loop {
            while core_head < self.trail.len() {
                if let Scan::Conflict(id) = self.scan(core_head, true, false) {
                    return Some(self.clause_conflict(id, trace));
                }
                core_head += 1;
            }
            let mut implied = false;
            while next_unit < self.units.len() {
                let id = self.units[next_unit];
                next_unit += 1;
                if self.core[id] {
                    continue;
                }
                let l = self.clauses[id].lits[0];
                match Self::value(&self.values, l) {
                    TRUE => {}
                    FALSE => {
                        self.propagations += 1;
                        return Some(self.conflict_from(Some(id), &[l], trace));
                    }
                    _ => {
                        self.assign(l, Some(id));
                        implied = true;
                        break;
                    }
                }
            }
            if implied {
                continue;
            }
            if any_head >= self.trail.len() {
                return None;
            }
            match self.scan(any_head, false, true) {
                Scan::Conflict(id) => return Some(self.clause_conflict(id, trace)),
                Scan::Implied => {}
                Scan::Exhausted => any_head += 1,
            }
        }
    }

    fn clause_conflict(&self, id: ClauseId, trace: bool) -> Conflict {
        let lits = self.clauses[id].lits.clone();
        self.conflict_from(Some(id), &lits, trace)
    }

    /// Visits the clauses watching the negation of `trail[index]`. `core_only` passes
    /// over non-core clauses; `stop_after_one` returns after the first implication.
    fn scan(&mut self, index: usize, core_only: bool, stop_after_one: bool) -> Scan {
        let falsified = -self.trail[index];
        self.propagations += 1;
        let mut watchers = core::mem::take(&mut self.watches[falsified.code()]);
        let mut kept = 0;
        let mut result = Scan::Exhausted;
        let mut i = 0;
        while i < watchers.len() {
            let id = watchers[i];
            i += 1;
            if !self.clauses[id].alive {
                continue;
            }
            if core_only && !self.core[id] {
                watchers[kept] = id;
                kept += 1;
                continue;
            }
            let stored = &mut self.clauses[id];
            if stored.lits[0] == falsified {
                stored.lits.swap(0, 1);
            }
            let other = stored.lits[0];
            if Self::value(&self.values, other) == TRUE {
                watchers[kept] = id;
                kept += 1;
                continue;
            }
            let replacement = (2..stored.lits.len())
                .find(|&k| Self::value(&self.values, stored.lits[k]) != FALSE);
            if let Some(k) = replacement {
                stored.lits.swap(1, k);
                let w = stored.lits[1];
                self.watches[w.code()].push(id);
                continue;
            }
            watchers[kept] = id;
            kept += 1;
            if Self::value(&self.values, other) == FALSE {
                result = Scan::Conflict(id);
                break;
            }
            let assigned = self.assign(other, Some(id));
            debug_assert!(assigned);
            if stop_after_one {
                result = Scan::Implied;
                break;
            }
        }
        while i < watchers.len() {
            watchers[kept] = watchers[i];
            kept += 1;
            i += 1;
        }
        watchers.truncate(kept);
        let slot = &mut self.watches[falsified.code()];
        // New watches never land on a false literal, so the slot is still empty.
        debug_assert!(slot.is_empty());
        *slot = watchers;
        result
    }

    /// Literals true after propagating all live units, or `None` on a conflict. Used to
    /// reconstruct the definitional fixpoint formula.
    pub fn top_level_assignment(&mut self) -> Option<Vec<Literal>> {
        let result = match self.propagate_under(&[], false) {
            Some(_) => None,
            None => Some(self.trail.clone()),
        };
        self.reset();
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::lit;

    fn engine(clauses: &[&[i32]]) -> Engine {
        let mut e = Engine::new();
        for c in clauses {
            e.insert(&Clause::from_ints(c));
        }
        e
    }

    #[test]
    fn chain_propagates_to_conflict() {
        let mut e = engine(&[&[1, 2], &[1, -2]]);
        let c = e.at(&[lit(1)], true).expect("conflict");
        assert_eq!(c.deps, vec![0, 1]);
        // State is reset between checks.
        assert!(e.at(&[lit(3)], true).is_none());
        assert!(e.at(&[lit(1)], false).is_some());
    }

    #[test]
    fn removal_is_lifo_and_effective() {
        let mut e = engine(&[&[1, 2], &[1, -2], &[1, 2]]);
        assert_eq!(e.remove(&Clause::from_ints(&[2, 1])), Some(2));
        assert!(e.at(&[lit(1)], false).is_some());
        assert_eq!(e.remove(&Clause::from_ints(&[1, 2])), Some(0));
        assert!(e.at(&[lit(1)], false).is_none());
        assert_eq!(e.remove(&Clause::from_ints(&[1, 2])), None);
    }

    #[test]
    fn tautology_conflicts_without_dependencies() {
        let mut e = engine(&[&[3, 4]]);
        let c = e.at(&[lit(1), lit(-1)], true).unwrap();
        assert!(c.deps.is_empty());
    }

    #[test]
    fn core_first_prefers_marked_clauses() {
        // Both {-1, 2} and {-1, 3},{-3, 2} imply 2 from 1; {-2} then conflicts.
        let mut e = engine(&[&[-1, 2], &[-1, 3], &[-3, 2], &[-2]]);
        assert_eq!(e.at(&[lit(-1)], true).unwrap().deps, vec![0, 3]);
        e.set_core_first(true);
        for id in [1, 2, 3] {
            e.mark_core(id);
        }
        assert_eq!(e.at(&[lit(-1)], true).unwrap().deps, vec![1, 2, 3]);
    }

    #[test]
    fn uninsert_and_revive_restore_the_database() {
        let mut e = engine(&[&[1, 2], &[1, -2]]);
        let id = e.insert(&Clause::from_ints(&[-1]));
        assert!(e.at(&[], false).is_some());
        e.uninsert(id);
        assert!(e.at(&[], false).is_none());
        assert_eq!(e.remove(&Clause::from_ints(&[1, -2])), Some(1));
        assert!(e.at(&[lit(1)], false).is_none());
        // Leave a stale watch behind before reviving.
        assert!(e.at(&[lit(1), lit(2)], false).is_some());
        e.revive(1);
        assert!(e.at(&[lit(1)], false).is_some());
        assert_eq!(e.live_containing(lit(-2)).len(), 1);
    }

    #[test]
    fn unit_clauses_feed_propagation() {
        let mut e = engine(&[&[1], &[-1, 2], &[-2, 3]]);
        assert_eq!(
            e.top_level_assignment(),
            Some(vec![lit(1), lit(2), lit(3)])
        );
        let c = e.at(&[lit(3)], true).unwrap();
        assert_eq!(c.deps, vec![0, 1, 2]);
    }
}
