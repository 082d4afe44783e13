"""Conversation metrics over chat messages and emails.

A student's "sends" are their chat messages plus emails. Receiving counts replies by
others to their messages, mentions of them by others, and emails addressed to them.
Response latency pairs a reply with its explicit reply_to target only; no thread
inference. Interaction diversity is the Shannon entropy of who a student replies to
and mentions, normalised by log(roster - 1).
"""

from __future__ import annotations

from ..evidence.types import EvidenceBundle
from ..stats import normalized_entropy
from .readability import flesch_reading_ease
from .sentiment import SentimentAnalyzer, sentiment_score
from .table import MetricTable


def conversation_metrics(bundle: EvidenceBundle, analyzer: SentimentAnalyzer | None = None) -> MetricTable:
    table = MetricTable(roster=bundle.roster_ids)
    roster = bundle.roster_ids

    sends: dict[str, list[tuple]] = {s: [] for s in roster}  # (ts, chars, text)
    for m in bundle.chat_messages:
        if m.sender in sends:
            sends[m.sender].append((m.timestamp, len(m.text), m.text))
    for e in bundle.emails:
        if e.sender in sends:
            sends[e.sender].append((e.timestamp, len(e.body), e.body))

    by_id = {m.id: m for m in bundle.chat_messages}
    received: dict[str, int] = {s: 0 for s in roster}
    latencies: dict[str, list[float]] = {s: [] for s in roster}
    counterparties: dict[str, dict[str, int]] = {s: {} for s in roster}

    for m in bundle.chat_messages:
        target = by_id.get(m.reply_to) if m.reply_to else None
        if target is not None and target.sender in received and m.sender != target.sender:
            received[target.sender] += 1
        if (
            target is not None
            and m.sender in latencies
            and target.sender is not None
            and target.sender != m.sender
        ):
            delta_min = (m.timestamp - target.timestamp).total_seconds() / 60.0
            if delta_min >= 0:
                latencies[m.sender].append(delta_min)
            if target.sender != m.sender:
                cp = counterparties[m.sender]
                cp[target.sender] = cp.get(target.sender, 0) + 1
        for mentioned in m.mentions_resolved:
            if mentioned in received and mentioned != m.sender:
                received[mentioned] += 1
            if m.sender in counterparties and mentioned != m.sender:
                cp = counterparties[m.sender]
                cp[mentioned] = cp.get(mentioned, 0) + 1
    for e in bundle.emails:
        for r in e.recipients:
            if r in received and r != e.sender:
                received[r] += 1

    send_counts: dict[str, float] = {}
    chars_per_msg: dict[str, float] = {}
    ratio: dict[str, float] = {}
    latency_mean: dict[str, float] = {}
    latency_support: dict[str, int] = {}
    gap_mean: dict[str, float] = {}
    silence: dict[str, float] = {}
    gap_support: dict[str, int] = {}
    diversity: dict[str, float] = {}
    diversity_support: dict[str, int] = {}
    sentiment: dict[str, float] = {}
    sentiment_support: dict[str, int] = {}

    for s in roster:
        events = sorted(sends[s], key=lambda t: t[0])
        n = len(events)
        send_counts[s] = float(n)
        chars_per_msg[s] = (sum(c for _, c, _ in events) / n) if n else 0.0
        ratio[s] = n / (received[s] + 1.0)

        if latencies[s]:
            latency_mean[s] = sum(latencies[s]) / len(latencies[s])
            latency_support[s] = len(latencies[s])
        else:
            latency_mean[s] = 0.0
            latency_support[s] = 0

        if n >= 2:
            gaps = [
                (b[0] - a[0]).total_seconds() / 3600.0 for a, b in zip(events, events[1:])
            ]
            gap_mean[s] = sum(gaps) / len(gaps)
            silence[s] = max(gaps)
            gap_support[s] = len(gaps)
        else:
            gap_mean[s] = bundle.window_hours
            silence[s] = bundle.window_hours
            gap_support[s] = 0

        cp_counts = list(counterparties[s].values())
        total_cp = sum(cp_counts)
        if len(roster) - 1 <= 1:
            diversity[s] = 1.0 if total_cp > 0 else 0.0
        else:
            diversity[s] = normalized_entropy(cp_counts, denominator_classes=len(roster) - 1)
        diversity_support[s] = total_cp

        value, support = sentiment_score((t for _, _, t in events), analyzer)
        sentiment[s] = value
        sentiment_support[s] = support

    send_support = {s: int(send_counts[s]) for s in roster}
    table.set_column("2a", send_counts, send_support)
    table.set_column("2b", chars_per_msg, send_support)
    table.set_column("2c", ratio, {s: send_support[s] + received[s] for s in roster})
    table.set_column("2d", latency_mean, latency_support)
    table.set_column("2e", gap_mean, gap_support)
    table.set_column("2f", silence, gap_support)
    table.set_column("2h", diversity, diversity_support)
    table.set_column("2i", sentiment, sentiment_support)

    msg_read = {}
    for s in roster:
        texts = [t for _, _, t in sends[s]]
        if texts:
            msg_read[s] = sum(max(0.0, flesch_reading_ease(t)) for t in texts) / len(texts)
        else:
            msg_read[s] = 0.0
    table.set_column("2g", msg_read, send_support)
    return table
