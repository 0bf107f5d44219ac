"""Decision core: joint move/working-memory selection over compound values,
error-triggered context switching, and model growth with weight migration.

Every step the agent scores candidate next inputs

    state  ^  signal  ^  working-memory  ^  context  ^  reward-token

with the linear critic and takes the best (move, memory) pair. The episode's
signal is bound into the first composed input only; afterwards the agent can
keep it alive solely through the working-memory slot. A context vector is
always bound in, letting one weight vector hold several conflicting policies.

The goal token arrives together with the pay: a paying transition bootstraps
into the tokened goal compound, and an absorbing update at episode end then
trains that compound toward the goal reward. Tokened compounds therefore
exist in the ledger exactly for (cell, memory, context) combinations that
have paid before, and their values self-renew near zero, keeping a permanent
value beacon over each context's paying goal.

Context switching is consulted at reward-relevant events:

* a paying step whose error exceeds +t means some other context predicted
  this pay, so the bank jumps to the context whose composed input scores
  highest (the positive switch);
* a silent step onto a cell that has paid before under the active context
  and memory, approached with near-goal confidence, is a failed pay
  prediction (reward error of -1 against a promised pay of 0), so the bank
  rotates sequentially (the negative switch);
* an episode that hits the step cap without pay rotates sequentially too,
  which keeps the greedy test phase from looping forever on a wrong context.

Any switch wipes the eligibility trace at the end of the step so later
errors cannot credit inputs composed under the discarded context.

When the running context scores all drift below the growth floor while the
error keeps crossing the threshold, the agent concludes no existing context
fits: it appends a new one, enlarges the vector space so orthogonality
survives, and either discards the learned critic (reset) or rebuilds it so
every previously scored compound keeps its value (transfer, via a
minimum-norm solve against the re-encoded compounds).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .critic import EligibilityTrace, ValueNetwork, logmod, td_error
from .hrr import IDENTITY_SYMBOL, SymbolLedger, grow_dimension, stack_and_solve
from .mazes import MazeEnv

GOAL_TOKEN_SYMBOL = "goal"

THRESHOLD_MODES = ("static", "dynamic")
COUNT_MODES = ("static", "dynamic")
GROWTH_METHODS = ("reset", "transfer")
ABLATION_MODES = ("both", "positive_only", "negative_only", "none")

#: Initial threshold whenever dynamic mode (re)starts.
DYNAMIC_THRESHOLD_INITIAL = 1.0


def state_symbol(position: int) -> str:
    return f"s{position}"


def signal_symbol(signal: Optional[str]) -> str:
    return IDENTITY_SYMBOL if signal is None else f"sig_{signal}"


def memory_symbol(signal: str) -> str:
    """Internal copy of a perceived signal, as storable memory content."""
    return f"wm_{signal}"


@dataclass
class AgentConfig:
    """Learning and switching parameters for one agent."""

    hrr_length: int
    gamma: float
    alpha_train: float
    alpha_test: float = 0.01
    epsilon_train: float = 1e-5
    epsilon_test: float = 0.0
    trace_lambda: float = 0.0
    threshold_mode: str = "static"
    threshold: float = 0.3
    threshold_alpha: float = -0.5
    growth_floor: float = -0.5
    atr_alpha: float = 0.0
    atr_count_mode: str = "static"
    atr_count: int = 1
    growth_method: str = "transfer"
    ablation_mode: str = "both"
    bootstrap_sign: float = 1.0
    update_threshold_on_switch: bool = False

    def validate(self) -> None:
        if self.hrr_length < 1:
            raise ValueError("hrr_length must be >= 1")
        for name in ("gamma", "alpha_train", "alpha_test", "epsilon_train",
                     "epsilon_test", "trace_lambda"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ValueError(f"unknown threshold_mode {self.threshold_mode!r}")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if self.atr_count_mode not in COUNT_MODES:
            raise ValueError(f"unknown atr_count_mode {self.atr_count_mode!r}")
        if self.atr_count < 1:
            raise ValueError("atr_count must be >= 1")
        if self.growth_method not in GROWTH_METHODS:
            raise ValueError(f"unknown growth_method {self.growth_method!r}")
        if self.ablation_mode not in ABLATION_MODES:
            raise ValueError(f"unknown ablation_mode {self.ablation_mode!r}")
        if self.bootstrap_sign not in (1.0, -1.0):
            raise ValueError("bootstrap_sign must be +1.0 or -1.0")


class AtrBank:
    """Ordered task-context symbols, their running scores, and the threshold.

    At least one context always exists. The per-context score accumulates
    logmod-scaled TD errors and exists purely to decide when no context fits
    any more (growth). In static mode the threshold is a constant; in dynamic
    mode it starts at one and integrates threshold_alpha * logmod(delta) on
    steps where no switch fired (unless configured otherwise).
    """

    def __init__(
        self,
        count: int,
        threshold_mode: str,
        static_threshold: float,
        threshold_alpha: float,
        atr_alpha: float,
        update_threshold_on_switch: bool = False,
    ):
        if count < 1:
            raise ValueError("a bank needs at least one context")
        self.names = [f"atr{i}" for i in range(count)]
        self.values = np.zeros(count, dtype=np.float64)
        self.current_index = 0
        self.threshold_mode = threshold_mode
        self.static_threshold = float(static_threshold)
        self.threshold_alpha = float(threshold_alpha)
        self.atr_alpha = float(atr_alpha)
        self.update_threshold_on_switch = update_threshold_on_switch
        self.threshold = (
            DYNAMIC_THRESHOLD_INITIAL
            if threshold_mode == "dynamic"
            else self.static_threshold
        )

    def __len__(self) -> int:
        return len(self.names)

    @property
    def current_name(self) -> str:
        return self.names[self.current_index]

    def advance(self) -> None:
        """Rotate to the next context in fixed order (wraps around)."""
        self.current_index = (self.current_index + 1) % len(self.names)

    def update_value(self, delta: float) -> None:
        """Credit the active context's score with the scaled error."""
        self.values[self.current_index] += self.atr_alpha * logmod(delta)

    def update_threshold(self, delta: float, switched_this_step: bool) -> None:
        if self.threshold_mode != "dynamic":
            return
        if switched_this_step and not self.update_threshold_on_switch:
            return
        self.threshold += self.threshold_alpha * logmod(delta)

    def mean_value(self) -> float:
        return float(np.mean(self.values))

    def grow(self) -> str:
        """Append a fresh context, zero all scores, reset the threshold, and
        make the new context current."""
        name = f"atr{len(self.names)}"
        self.names.append(name)
        self.values = np.zeros(len(self.names), dtype=np.float64)
        self.current_index = len(self.names) - 1
        self.threshold = (
            DYNAMIC_THRESHOLD_INITIAL
            if self.threshold_mode == "dynamic"
            else self.static_threshold
        )
        return name


@dataclass
class GrowthEvent:
    episode: int
    step: int
    old_dimension: int
    new_dimension: int
    atr_count: int
    method: str
    transfer_residual: Optional[float] = None


@dataclass
class EpisodeRecord:
    steps: int
    goal_reached: bool
    start: int
    context: int
    signal: Optional[str]
    optimal: int
    switches: list[tuple[str, int]] = field(default_factory=list)
    growths: int = 0
    final_delta: float = 0.0


class HrrAgent:
    """One agent: a ledger, a critic, a trace, and a context bank.

    Confined to a single execution context; owns its RNG stream. The weight
    vector is drawn first so the draw order (weights, then atoms on demand)
    is reproducible for a fixed seed.
    """

    def __init__(self, config: AgentConfig, rng: np.random.Generator):
        config.validate()
        self.config = config
        self.rng = rng
        self.net = ValueNetwork.with_random_weights(config.hrr_length, rng)
        self.ledger = SymbolLedger(config.hrr_length, rng)
        self.trace = EligibilityTrace(config.hrr_length, config.trace_lambda)
        count = config.atr_count if config.atr_count_mode == "static" else 1
        self.bank = AtrBank(
            count,
            config.threshold_mode,
            config.threshold,
            config.threshold_alpha,
            config.atr_alpha,
            config.update_threshold_on_switch,
        )
        self.wm = IDENTITY_SYMBOL
        self.eval_count = 0
        self.growth_events: list[GrowthEvent] = []
        self._episode_index = -1

    # -- composition and evaluation ------------------------------------------

    def compose_input(
        self,
        state: str,
        signal: str,
        wm: str,
        atr: str,
        reward_token: str,
    ) -> np.ndarray:
        """One compound for (state, signal, memory, context, token)."""
        return self.ledger.encode((state, signal, wm, atr, reward_token))

    def _value_of(self, u: np.ndarray) -> float:
        self.eval_count += 1
        return float(self.net.weights @ u) + self.net.bias

    def value_of_symbols(self, state, signal, wm, atr, reward_token) -> float:
        return self._value_of(self.compose_input(state, signal, wm, atr, reward_token))

    # -- selection -------------------------------------------------------------

    def _wm_candidates(self, episode_signal: Optional[str], first_step: bool) -> list[str]:
        """Storable memory contents: the perceived signal's internal copy
        (only while the signal is present), the previous content, and empty."""
        cands: list[str] = []
        if first_step and episode_signal is not None:
            cands.append(memory_symbol(episode_signal))
        if self.wm not in cands:
            cands.append(self.wm)
        if IDENTITY_SYMBOL not in cands:
            cands.append(IDENTITY_SYMBOL)
        return cands

    def _select(
        self,
        move_syms: list[str],
        wm_syms: list[str],
        epsilon: float,
    ) -> tuple[int, str, float]:
        """Greedy joint (move, memory) choice over the candidate cross
        product, ties to the lowest flat index; with probability epsilon the
        move alone is replaced by a uniform candidate.

        Candidates are scored as the next step's input: signal and token
        slots are identity, because that is the compound the agent composes
        after an ordinary move. Whether a cell pays is learnable, never
        observable in advance.
        """
        atr = self.bank.current_name
        weights = self.net.weights
        bias = self.net.bias
        encode = self.ledger.encode
        best_val = -np.inf
        best_i = 0
        best_wm = wm_syms[0]
        for i, m in enumerate(move_syms):
            for w in wm_syms:
                u = encode((m, IDENTITY_SYMBOL, w, atr, IDENTITY_SYMBOL))
                v = float(weights @ u) + bias
                self.eval_count += 1
                if v > best_val:
                    best_val = v
                    best_i = i
                    best_wm = w
        if epsilon > 0.0 and self.rng.random() < epsilon:
            i = int(self.rng.integers(len(move_syms)))
            if i != best_i:
                u = encode((move_syms[i], IDENTITY_SYMBOL, best_wm, atr, IDENTITY_SYMBOL))
                best_val = float(weights @ u) + bias
                self.eval_count += 1
                best_i = i
        return best_i, best_wm, best_val

    def select_action(
        self,
        candidate_states: list[str],
        wm_candidates: list[str],
        signal: str,
        reward_token: str,
        epsilon: float = 0.0,
    ) -> tuple[str, str]:
        """Public joint selection over explicit candidate symbol lists."""
        if not candidate_states:
            raise ValueError("candidate_states must be non-empty")
        if not wm_candidates:
            raise ValueError("wm_candidates must be non-empty")
        atr = self.bank.current_name
        best_val = -np.inf
        best = (candidate_states[0], wm_candidates[0])
        for m in candidate_states:
            for w in wm_candidates:
                v = self._value_of(self.compose_input(m, signal, w, atr, reward_token))
                if v > best_val:
                    best_val = v
                    best = (m, w)
        if epsilon > 0.0 and self.rng.random() < epsilon:
            move = candidate_states[int(self.rng.integers(len(candidate_states)))]
            best = (move, best[1])
        return best

    # -- context switching and growth --------------------------------------------

    def maybe_switch_atr(
        self,
        delta: float,
        state: str,
        signal: str,
        wm: str,
        reward_token: str,
        value_current: float = 0.0,
    ) -> tuple[bool, str]:
        """Swap the active context when the error leaves the threshold band.

        Negative crossings rotate sequentially (the right context cannot be
        inferred from a failure); positive crossings jump to the context
        whose composed input, using this step's other components, scores
        highest. Ablation modes disable either direction. The caller must
        clear the trace after any switch.

        A negative crossing only counts where the agent's own estimate
        claimed near-goal confidence (|value_current| within the band):
        under the optimistic start every fresh transition is a large
        negative surprise, and rotating on those would never let any context
        finish learning a value function.
        """
        mode = self.config.ablation_mode
        t = self.bank.threshold
        if (
            delta < -t
            and abs(value_current) <= t
            and mode in ("both", "negative_only")
        ):
            self.bank.advance()
            return True, "negative"
        if delta > t and mode in ("both", "positive_only"):
            best_j = 0
            best_v = -np.inf
            for j, name in enumerate(self.bank.names):
                v = self._value_of(self.compose_input(state, signal, wm, name, reward_token))
                if v > best_v:
                    best_v = v
                    best_j = j
            # Jump only to a context that confidently recognizes the
            # situation; during (re)learning every context scores either
            # fresh-optimistic or mush-negative here, and jumping on those
            # yanks the bank around on every surprising pay.
            if abs(best_v) <= t:
                self.bank.current_index = best_j
                return True, "positive"
        return False, "none"

    def maybe_grow(self, threshold_crossed: bool) -> Optional[GrowthEvent]:
        """Grow when the threshold was crossed (either direction, regardless
        of whether a switch actually fired) and the mean context score has
        sunk below the growth floor. Static count mode never grows."""
        if self.config.atr_count_mode != "dynamic" or not threshold_crossed:
            return None
        if self.bank.mean_value() >= self.config.growth_floor:
            return None
        return self.apply_growth()

    def apply_growth(self, step: int = -1) -> GrowthEvent:
        """Append one context, enlarge the space, and migrate the critic."""
        new_count = len(self.bank) + 1
        old_dim = self.ledger.dimension
        new_dim = grow_dimension(old_dim, new_count)
        residual = None
        if self.config.growth_method == "transfer":
            residual = self._migrate_transfer(new_dim)
        else:
            self._migrate_reset(new_dim)
        self.bank.grow()
        self.trace = EligibilityTrace(new_dim, self.config.trace_lambda)
        event = GrowthEvent(
            episode=self._episode_index,
            step=step,
            old_dimension=old_dim,
            new_dimension=new_dim,
            atr_count=new_count,
            method=self.config.growth_method,
            transfer_residual=residual,
        )
        self.growth_events.append(event)
        return event

    def _migrate_reset(self, new_dim: int) -> None:
        """Drop every representation and the learned critic; start fresh."""
        self.ledger = SymbolLedger(new_dim, self.rng)
        self.net = ValueNetwork.with_random_weights(new_dim, self.rng)

    def _migrate_transfer(self, new_dim: int) -> float:
        """Rebuild representations at the new length and solve for weights
        that reproduce the learned component of every compound ever scored."""
        old_keys = list(self.ledger.compounds)
        learned = np.array(
            [float(self.net.weights @ self.ledger.compounds[k]) for k in old_keys]
        )
        new_ledger = SymbolLedger(new_dim, self.rng)
        if old_keys:
            if len(old_keys) > new_dim:
                warnings.warn(
                    f"transfer is overdetermined ({len(old_keys)} compounds "
                    f"> {new_dim} dimensions); falling back to least squares",
                    stacklevel=2,
                )
            rows = np.stack([new_ledger.encode(k) for k in old_keys])
            w = stack_and_solve(rows, learned)
            residual = float(np.max(np.abs(rows @ w - learned)))
        else:
            w = np.zeros(new_dim)
            residual = 0.0
        self.ledger = new_ledger
        self.net = ValueNetwork(w)
        return residual

    # -- episode loop --------------------------------------------------------------

    def run_episode(self, env: MazeEnv, mode: str = "train") -> EpisodeRecord:
        """Drive one episode: compose, select, step, learn, switch, grow.

        Train mode uses alpha_train/epsilon_train; test mode alpha_test/
        epsilon_test. The weight update runs before the switch cascade so the
        step that detects a context change still learns; the trace is wiped
        at the end of any switching step.
        """
        if mode not in ("train", "test"):
            raise ValueError(f"unknown mode {mode!r}")
        cfg = self.config
        alpha = cfg.alpha_train if mode == "train" else cfg.alpha_test
        epsilon = cfg.epsilon_train if mode == "train" else cfg.epsilon_test

        env.reset()
        self._episode_index += 1
        start, context, signal = env.position, env.context, env.signal
        self.wm = IDENTITY_SYMBOL
        self.trace.clear()
        record = EpisodeRecord(
            steps=0,
            goal_reached=False,
            start=start,
            context=context,
            signal=signal,
            optimal=env.task.optimal_steps(start, context, signal),
        )
        if env.at_goal():
            # Degenerate spawn on the paying goal: zero steps, counted
            # optimal; the occupied goal compound still takes its update.
            record.goal_reached = True
            goal_key = (
                state_symbol(env.position),
                signal_symbol(signal),
                self.wm,
                self.bank.current_name,
                GOAL_TOKEN_SYMBOL,
            )
            record.final_delta = self._absorbing_update(alpha, 0.0, goal_key)
            return record

        # The signal is perceivable only now; it is bound into this first
        # input and afterwards survives only if gated into working memory.
        u_key = (
            state_symbol(env.position),
            signal_symbol(signal),
            self.wm,
            self.bank.current_name,
            IDENTITY_SYMBOL,
        )
        step_idx = 0
        while True:
            u_vec = self.ledger.encode(u_key)
            v_cur = self._value_of(u_vec)
            moves = env.task.neighbors(env.position)
            move_syms = [state_symbol(p) for p in moves]
            wm_syms = self._wm_candidates(signal, first_step=(step_idx == 0))
            move_i, wm_sym, v_next = self._select(move_syms, wm_syms, epsilon)
            reward, goal_token, done = env.step(moves[move_i])
            goal_key = (
                move_syms[move_i],
                IDENTITY_SYMBOL,
                wm_sym,
                self.bank.current_name,
                GOAL_TOKEN_SYMBOL,
            )
            if goal_token:
                # The pay arrives with the goal token: the realized next
                # input is the tokened goal compound, which the absorbing
                # update at episode end trains toward zero.
                v_next = self._value_of(self.ledger.encode(goal_key))
            delta = td_error(
                reward, cfg.gamma, v_next, v_cur,
                terminal=False, bootstrap_sign=cfg.bootstrap_sign,
            )

            # Learn first; a switch wipes the trace afterwards so later
            # errors cannot credit inputs composed under the wrong context.
            self.trace.update(u_vec)
            self.net.apply_update(alpha, delta, self.trace)

            t = self.bank.threshold
            crossed = delta < -t or delta > t
            switched, direction = self._consult_switching(
                delta, goal_token, goal_key, u_key, v_cur, v_next, reward, alpha
            )
            if switched:
                record.switches.append((direction, step_idx))
                self.trace.clear()
            self.bank.update_value(delta)
            self.bank.update_threshold(delta, switched)
            if self.maybe_grow(crossed) is not None:
                record.growths += 1
                self.growth_events[-1].step = step_idx

            self.wm = wm_sym
            step_idx += 1
            record.final_delta = delta
            if done:
                record.steps = step_idx
                record.goal_reached = goal_token
                if goal_token:
                    final_goal_key = (
                        state_symbol(env.position),
                        IDENTITY_SYMBOL,
                        self.wm,
                        self.bank.current_name,
                        GOAL_TOKEN_SYMBOL,
                    )
                    record.final_delta = self._absorbing_update(
                        alpha, reward, final_goal_key
                    )
                elif self.config.ablation_mode in ("both", "negative_only"):
                    # A whole episode without pay is the strongest negative
                    # evidence about the active context; without this the
                    # greedy test phase can loop forever on a wrong context,
                    # starving the switch detector of evidence.
                    self.bank.advance()
                    self.trace.clear()
                    record.switches.append(("negative", step_idx))
                return record
            u_key = (
                state_symbol(env.position),
                IDENTITY_SYMBOL,
                self.wm,
                self.bank.current_name,
                IDENTITY_SYMBOL,
            )

    def _consult_switching(
        self, delta, goal_token, goal_key, u_key, v_cur, v_next, reward, alpha
    ) -> tuple[bool, str]:
        """Consult the switch detector at reward-relevant events only.

        On a pay the positive direction applies: an unexpected pay means
        another context predicted it. On a silent step onto a cell whose
        tokened compound already exists in the ledger, the pay this context
        once earned here did not come; the pay-prediction error (the reward
        against the promised pay) is the negative crossing, taken where both
        the promise and the agent's own estimate were near-goal confident.
        Plain bootstrap errors elsewhere are value propagation, not context
        evidence: under an optimistic start they cross the threshold on
        almost every step of initial learning.

        Every such silent arrival also writes a correction against the
        tokened compound itself, so beliefs about pays that stopped being
        earned expire instead of firing the claim check forever; a context
        whose pay is current keeps its belief pinned near zero through the
        absorbing updates.
        """
        mode = self.config.ablation_mode
        t = self.bank.threshold
        if goal_token:
            if delta > t and mode in ("both", "positive_only"):
                return self.maybe_switch_atr(
                    delta, u_key[0], u_key[1], u_key[2], u_key[4], v_cur
                )
            return False, "none"
        if goal_key not in self.ledger.compounds:
            return False, "none"
        promise_vec = self.ledger.compounds[goal_key]
        v_promise = self._value_of(promise_vec)
        switched = False
        if (
            abs(v_promise) <= t
            and abs(v_cur) <= t
            and reward - 0.0 < -t
            and mode in ("both", "negative_only")
        ):
            self.bank.advance()
            switched = True
        correction = alpha * logmod((reward + self.config.gamma * v_next) - v_promise)
        if correction != 0.0:
            self.net.weights += correction * promise_vec
        return switched, ("negative" if switched else "none")

    def _absorbing_update(self, alpha: float, reward: float, goal_key) -> float:
        """Final update of an episode that ended on the paying goal: the
        occupied goal compound itself is trained toward the goal reward with
        no bootstrap, so its value settles at zero instead of staying forever
        unvisited.

        This is a terminal value regression, not a prediction about a
        transition, so it learns without driving the switch cascade."""
        u_vec = self.ledger.encode(goal_key)
        v_cur = self._value_of(u_vec)
        delta = td_error(reward, self.config.gamma, 0.0, v_cur, terminal=True)
        self.trace.update(u_vec)
        self.net.apply_update(alpha, delta, self.trace)
        return delta
