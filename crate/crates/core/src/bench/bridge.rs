//! Bridge endplay generators. A NoTrump k-endplay over a 4n-card deck: four
//! seats play tricks clockwise, the declarer (South) also handles the
//! dummy's (North) cards, and the winner of a trick leads the next. States
//! encode hands, the unordered set of used-up cards, the current trick,
//! the leader, and the score; the declarer's uncertainty ranges over the
//! unseen distribution of cards between the opponents.
//!
//! Two variants:
//!   * standard — strictly turn-based; every card is laid openly, so the
//!     declarer observes each step (lockstep up to terminal self-loops);
//!   * absent-minded — the declarer does not see the opponents' cards until
//!     the trick ends and may lay her own and the dummy's cards at any
//!     point after the lead, possibly in parallel with the opponents.
//!
//! The trick is stored per-seat rather than as a play sequence, matching
//! imperfect recall of the order; the winner only depends on the led card.
//! State counts are encoding-sensitive and treated as calibration targets.

use crate::icgs::{ActionId, Model, ModelParts, StateId, StateSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

const NONE: u8 = 0xFF;
/// Marks a hidden lead in the declarer's view.
const OPAQUE: u8 = 0xFE;

/// Seats in clockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seat {
    North = 0,
    East = 1,
    South = 2,
    West = 3,
}

const SEATS: [Seat; 4] = [Seat::North, Seat::East, Seat::South, Seat::West];

impl Seat {
    fn idx(self) -> usize {
        self as usize
    }

    fn clockwise(self, steps: usize) -> Seat {
        SEATS[(self.idx() + steps) % 4]
    }

    fn south_side(self) -> bool {
        matches!(self, Seat::North | Seat::South)
    }
}

#[derive(Debug, Clone)]
pub struct BridgeInstance {
    /// Ranks per suit; the deck has 4n cards.
    pub n: u8,
    /// Cards per hand in the endplay.
    pub k: u8,
    pub seed: u64,
    /// Dealt hands in seat order N, E, S, W (card ids).
    pub hands: [Vec<u8>; 4],
    /// Cards used up before the endplay begins.
    pub played: Vec<u8>,
}

fn suit(n: u8, card: u8) -> u8 {
    card / n
}

fn rank(n: u8, card: u8) -> u8 {
    card % n
}

fn card_name(n: u8, card: u8) -> String {
    let suits = ['s', 'h', 'd', 'c'];
    format!("{}{}", suits[suit(n, card) as usize], rank(n, card))
}

/// Samples a deal uniformly: shuffle the deck, give k cards to each seat,
/// the remainder counts as already played.
pub fn deal_bridge(n: u8, k: u8, seed: u64) -> BridgeInstance {
    assert!(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deck: Vec<u8> = (0..4 * n).collect();
    deck.shuffle(&mut rng);
    let mut hands: [Vec<u8>; 4] = Default::default();
    for (i, hand) in hands.iter_mut().enumerate() {
        let mut cards: Vec<u8> = deck[i * k as usize..(i + 1) * k as usize].to_vec();
        cards.sort();
        *hand = cards;
    }
    let mut played: Vec<u8> = deck[4 * k as usize..].to_vec();
    played.sort();
    BridgeInstance { n, k, seed, hands, played }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct GameState {
    hands: [u32; 4],
    used: u32,
    /// Card laid by each seat in the current trick; NONE when pending.
    slots: [u8; 4],
    /// Seat whose card is the lead of the current trick; NONE before it.
    led: u8,
    /// Seat opening the current trick.
    leader: u8,
    ns_tricks: u8,
    we_tricks: u8,
}

impl GameState {
    fn terminal(&self) -> bool {
        self.hands.iter().all(|h| *h == 0) && self.slots.iter().all(|s| *s == NONE)
    }

    fn trick_full(&self) -> bool {
        self.slots.iter().all(|s| *s != NONE)
    }

    fn filled(&self) -> usize {
        self.slots.iter().filter(|s| **s != NONE).count()
    }
}

fn hand_cards(hand: u32) -> impl Iterator<Item = u8> {
    (0u8..32).filter(move |c| hand >> c & 1 == 1)
}

/// Cards legal against a led suit: follow if the hand can, anything else
/// otherwise.
fn follow_suit(n: u8, hand: u32, led_suit: u8) -> Vec<u8> {
    let suited: Vec<u8> = hand_cards(hand).filter(|c| suit(n, *c) == led_suit).collect();
    if suited.is_empty() {
        hand_cards(hand).collect()
    } else {
        suited
    }
}

fn resolve_trick(n: u8, s: &GameState) -> GameState {
    let led_card = s.slots[s.led as usize];
    let led_suit = suit(n, led_card);
    let mut winner = s.led as usize;
    for seat in 0..4 {
        let c = s.slots[seat];
        if suit(n, c) == led_suit && rank(n, c) > rank(n, s.slots[winner]) {
            winner = seat;
        }
    }
    let mut next = s.clone();
    for c in next.slots.iter_mut() {
        next.used |= 1 << *c;
        *c = NONE;
    }
    next.led = NONE;
    next.leader = winner as u8;
    if SEATS[winner].south_side() {
        next.ns_tricks += 1;
    } else {
        next.we_tricks += 1;
    }
    next
}

/// Per-state description used while exploring: what each agent may do and
/// how a joint choice moves the game.
struct Variant {
    absent_minded: bool,
}

impl Variant {
    /// Protocol per agent (agent order N, E, S, W), cards ascending with
    /// wait last when allowed.
    fn protocols(&self, n: u8, s: &GameState, wait: ActionId) -> [Vec<ActionId>; 4] {
        let mut out: [Vec<ActionId>; 4] =
            [vec![wait], vec![wait], vec![wait], vec![wait]];
        if s.terminal() || s.trick_full() {
            return out;
        }
        let leader = SEATS[s.leader as usize];
        if !self.absent_minded {
            let mover = leader.clockwise(s.filled());
            let cards = if s.filled() == 0 {
                hand_cards(s.hands[mover.idx()]).collect()
            } else {
                follow_suit(n, s.hands[mover.idx()], suit(n, s.slots[s.led as usize]))
            };
            let actor = if mover.south_side() { Seat::South } else { mover };
            out[actor.idx()] = cards.into_iter().map(|c| ActionId(c as usize)).collect();
            return out;
        }

        // Absent-minded: opponents keep their clockwise discipline, the
        // declarer's side escapes it.
        if s.led == NONE {
            if leader.south_side() {
                // Declarer must open the trick, from either of her hands.
                let mut cards: Vec<u8> = hand_cards(s.hands[Seat::South.idx()])
                    .chain(hand_cards(s.hands[Seat::North.idx()]))
                    .collect();
                cards.sort();
                out[Seat::South.idx()] =
                    cards.into_iter().map(|c| ActionId(c as usize)).collect();
            } else {
                // Opponent leads, forced; the declarer may already lay a
                // blind card from an unfilled hand of hers, or wait.
                out[leader.idx()] = hand_cards(s.hands[leader.idx()])
                    .map(|c| ActionId(c as usize))
                    .collect();
                out[Seat::South.idx()] = self.south_options(n, s, wait);
            }
            return out;
        }

        // Lead laid: the first unfilled opponent clockwise from the leader
        // is forced to play, following suit openly.
        for step in 0..4 {
            let seat = leader.clockwise(step);
            if seat.south_side() || s.slots[seat.idx()] != NONE {
                continue;
            }
            out[seat.idx()] = follow_suit(n, s.hands[seat.idx()], suit(n, s.slots[s.led as usize]))
                .into_iter()
                .map(|c| ActionId(c as usize))
                .collect();
            break;
        }
        out[Seat::South.idx()] = self.south_options(n, s, wait);
        out
    }

    /// Declarer options after/while the trick is open: cards from her
    /// unfilled hands plus wait. She follows suit only when she laid the
    /// lead herself; an opponent's lead stays hidden until the trick ends,
    /// so her protocol cannot depend on it.
    fn south_options(&self, n: u8, s: &GameState, wait: ActionId) -> Vec<ActionId> {
        let mut cards: Vec<u8> = Vec::new();
        let led_known = s.led != NONE && SEATS[s.led as usize].south_side();
        for seat in [Seat::North, Seat::South] {
            if s.slots[seat.idx()] != NONE || s.hands[seat.idx()] == 0 {
                continue;
            }
            if led_known {
                cards.extend(follow_suit(n, s.hands[seat.idx()], suit(n, s.slots[s.led as usize])));
            } else {
                cards.extend(hand_cards(s.hands[seat.idx()]));
            }
        }
        cards.sort();
        cards.dedup();
        let mut out: Vec<ActionId> = cards.into_iter().map(|c| ActionId(c as usize)).collect();
        out.push(wait);
        out
    }

    fn step(&self, n: u8, s: &GameState, joint: &[ActionId; 4], wait: ActionId) -> GameState {
        if s.terminal() {
            return s.clone();
        }
        if s.trick_full() {
            return resolve_trick(n, s);
        }
        let mut plays: Vec<(Seat, u8)> = Vec::new();
        for agent in SEATS {
            let act = joint[agent.idx()];
            if act == wait {
                continue;
            }
            let card = act.0 as u8;
            let owner = if agent == Seat::South {
                // The declarer's action names a card from either of her
                // hands; ownership decides the slot it fills.
                if s.hands[Seat::South.idx()] >> card & 1 == 1 {
                    Seat::South
                } else {
                    Seat::North
                }
            } else {
                agent
            };
            plays.push((owner, card));
        }
        if plays.is_empty() {
            return s.clone();
        }
        let mut next = s.clone();
        for &(seat, card) in &plays {
            next.hands[seat.idx()] &= !(1u32 << card);
            next.slots[seat.idx()] = card;
        }
        if next.led == NONE {
            let leader = SEATS[s.leader as usize];
            next.led = if leader.south_side() {
                // Exactly one S-side card opens the trick.
                plays[0].0 as u8
            } else {
                s.leader
            };
            // An opponent's lead may not have been laid in this very joint
            // (the declarer playing blind first is impossible: the leading
            // opponent is forced), so the slot is filled whenever led is.
            debug_assert!(next.slots[next.led as usize] != NONE);
        }
        next
    }

    /// Observation key per agent. Everyone sees the dummy's hand, the used
    /// cards, the leader and the score; each agent additionally sees its
    /// own hand. The absent-minded declarer sees only her side's
    /// contributions to the open trick and the lead slot only when her side
    /// led; everyone else sees the whole trick.
    fn view(&self, s: &GameState, agent: Seat) -> Vec<u64> {
        let mut v: Vec<u64> = vec![
            s.hands[Seat::North.idx()] as u64,
            s.used as u64,
            s.leader as u64,
            s.ns_tricks as u64,
            s.we_tricks as u64,
        ];
        if agent != Seat::North {
            v.push(s.hands[agent.idx()] as u64);
        }
        if self.absent_minded && agent == Seat::South {
            v.push(s.slots[Seat::North.idx()] as u64);
            v.push(s.slots[Seat::South.idx()] as u64);
            let led_mark = if SEATS[s.leader as usize].south_side() {
                s.led
            } else {
                OPAQUE
            };
            v.push(led_mark as u64);
        } else {
            v.extend(s.slots.iter().map(|c| *c as u64));
            v.push(s.led as u64);
        }
        v
    }
}

/// A generated endplay model together with its designated initial state
/// (the beginning state matching the instance's actual deal) and the full
/// set of beginning states (one per opponent-hand distribution).
pub struct BridgeModel {
    pub model: Model,
    pub initial: StateId,
    pub beginning: Vec<StateId>,
}

pub fn gen_bridge(inst: &BridgeInstance) -> BridgeModel {
    generate(inst, Variant { absent_minded: false })
}

pub fn gen_bridge_absentminded(inst: &BridgeInstance) -> BridgeModel {
    generate(inst, Variant { absent_minded: true })
}

fn generate(inst: &BridgeInstance, variant: Variant) -> BridgeModel {
    let n = inst.n;
    let k = inst.k;
    let wait = ActionId(4 * n as usize);
    let mask = |cards: &[u8]| cards.iter().fold(0u32, |m, c| m | 1 << c);

    // Beginning states: every split of the opponents' pool, sorted.
    let pool: Vec<u8> = {
        let mut p: Vec<u8> = inst.hands[Seat::East.idx()]
            .iter()
            .chain(inst.hands[Seat::West.idx()].iter())
            .copied()
            .collect();
        p.sort();
        p
    };
    let mut beginnings: Vec<GameState> = Vec::new();
    let mut initial_key: Option<GameState> = None;
    let picks = combinations(pool.len(), k as usize);
    for pick in picks {
        let west: Vec<u8> = pick.iter().map(|i| pool[*i]).collect();
        let east: Vec<u8> = pool
            .iter()
            .filter(|c| !west.contains(c))
            .copied()
            .collect();
        let gs = GameState {
            hands: [
                mask(&inst.hands[Seat::North.idx()]),
                mask(&east),
                mask(&inst.hands[Seat::South.idx()]),
                mask(&west),
            ],
            used: mask(&inst.played),
            slots: [NONE; 4],
            led: NONE,
            leader: Seat::South as u8,
            ns_tricks: 0,
            we_tricks: 0,
        };
        if west == inst.hands[Seat::West.idx()] {
            initial_key = Some(gs.clone());
        }
        beginnings.push(gs);
    }
    beginnings.sort();
    beginnings.dedup();

    // BFS in canonical order.
    let mut index: HashMap<GameState, u32> = HashMap::new();
    let mut states: Vec<GameState> = Vec::new();
    let mut queue: std::collections::VecDeque<u32> = Default::default();
    for gs in &beginnings {
        if !index.contains_key(gs) {
            let id = states.len() as u32;
            index.insert(gs.clone(), id);
            states.push(gs.clone());
            queue.push_back(id);
        }
    }
    let mut protocol_rows: Vec<[Vec<ActionId>; 4]> = Vec::new();
    let mut successor_rows: Vec<Vec<u32>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let gs = states[id as usize].clone();
        let protos = variant.protocols(n, &gs, wait);
        let radices: [usize; 4] = [
            protos[0].len(),
            protos[1].len(),
            protos[2].len(),
            protos[3].len(),
        ];
        let mut row = Vec::with_capacity(radices.iter().product());
        let mut pos = [0usize; 4];
        loop {
            let joint = [
                protos[0][pos[0]],
                protos[1][pos[1]],
                protos[2][pos[2]],
                protos[3][pos[3]],
            ];
            let next = variant.step(n, &gs, &joint, wait);
            let next_id = match index.get(&next) {
                Some(i) => *i,
                None => {
                    let i = states.len() as u32;
                    index.insert(next.clone(), i);
                    states.push(next);
                    queue.push_back(i);
                    i
                }
            };
            row.push(next_id);
            let mut a = 4;
            loop {
                if a == 0 {
                    break;
                }
                a -= 1;
                pos[a] += 1;
                if pos[a] < radices[a] {
                    break;
                }
                pos[a] = 0;
            }
            if pos.iter().all(|p| *p == 0) {
                break;
            }
        }
        protocol_rows.push(protos);
        successor_rows.push(row);
    }

    let num = states.len();
    let mut win = StateSet::empty(num);
    let mut state_names = Vec::with_capacity(num);
    for (i, gs) in states.iter().enumerate() {
        state_names.push(format!("g{i}"));
        if gs.terminal() && 2 * gs.ns_tricks > k {
            win.insert(StateId(i));
        }
    }

    let mut action_names: Vec<String> = (0..4 * n).map(|c| card_name(n, c)).collect();
    action_names.push("wait".to_string());

    let mut protocol: Vec<Vec<Vec<ActionId>>> = vec![Vec::with_capacity(num); 4];
    for row in &protocol_rows {
        for (a, p) in row.iter().enumerate() {
            protocol[a].push(p.clone());
        }
    }

    let mut epistemic_keys: Vec<Vec<u64>> = Vec::with_capacity(4);
    for agent in SEATS {
        let mut views: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut keys = Vec::with_capacity(num);
        for gs in &states {
            let view = variant.view(gs, agent);
            let next_key = views.len() as u64;
            let key = *views.entry(view).or_insert(next_key);
            keys.push(key);
        }
        epistemic_keys.push(keys);
    }

    let model = Model::from_parts(ModelParts {
        agent_names: SEATS.iter().map(|s| seat_name(*s).to_string()).collect(),
        state_names,
        action_names,
        atoms: vec![("win".to_string(), win)],
        protocol,
        successors: successor_rows,
        epistemic_keys,
    });
    let initial_gs = initial_key.expect("instance deal is one of the beginnings");
    let initial = StateId(index[&initial_gs] as usize);
    let beginning = beginnings
        .iter()
        .map(|gs| StateId(index[gs] as usize))
        .collect();
    BridgeModel { model, initial, beginning }
}

fn seat_name(s: Seat) -> &'static str {
    match s {
        Seat::North => "N",
        Seat::East => "E",
        Seat::South => "S",
        Seat::West => "W",
    }
}

/// All size-k index subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(2, 1), vec![vec![0], vec![1]]);
    }

    #[test]
    fn smallest_endplay_shape() {
        let inst = deal_bridge(1, 1, 7);
        let bm = gen_bridge(&inst);
        assert!(bm.model.validate().is_ok(), "{}", bm.model.validate());
        assert_eq!(bm.beginning.len(), 2);
        // Calibration target for this encoding.
        assert_eq!(bm.model.num_states(), 11);
        // South always wins the single trick: one terminal state, labeled.
        assert_eq!(bm.model.atom_set("win").unwrap().len(), 1);
    }

    #[test]
    fn absent_minded_shape() {
        let inst = deal_bridge(1, 1, 7);
        let bm = gen_bridge_absentminded(&inst);
        assert!(bm.model.validate().is_ok(), "{}", bm.model.validate());
        // Calibration note: this encoding tracks which declarer-side slot
        // holds the lead and the seat that won the trick, which refines the
        // coarsest possible state space (24 states here instead of 19).
        assert_eq!(bm.model.num_states(), 24);
        assert_eq!(bm.beginning.len(), 2);
    }

    #[test]
    fn standard_is_lockstep_for_south_up_to_terminal_loops() {
        let inst = deal_bridge(2, 2, 3);
        let bm = gen_bridge(&inst);
        let s = bm.model.agent_id("S").unwrap();
        assert!(bm.model.is_lockstep_for(s, true));
        // Self-looping states sit in singleton classes, which preserves the
        // coincidence of the plain and steadfast next-step operators.
        for q in 0..bm.model.num_states() {
            let q = StateId(q);
            if bm.model.successors_of(q).contains(&q) {
                assert_eq!(bm.model.epistemic_class(s, q).len(), 1);
            }
        }
    }

    #[test]
    fn absent_minded_is_not_lockstep_for_south() {
        let inst = deal_bridge(2, 2, 3);
        let bm = gen_bridge_absentminded(&inst);
        let s = bm.model.agent_id("S").unwrap();
        assert!(!bm.model.is_lockstep_for(s, true));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = gen_bridge(&deal_bridge(2, 2, 11));
        let b = gen_bridge(&deal_bridge(2, 2, 11));
        assert_eq!(a.model.num_states(), b.model.num_states());
        assert_eq!(
            crate::textfmt::serialize_model(&a.model),
            crate::textfmt::serialize_model(&b.model)
        );
        assert_eq!(a.initial, b.initial);
    }
}
