"""Brute-force oracles for the audit metrics.

Deliberately independent of the library: sets are built with explicit
loops from the raw event/record tuples and compared element by element.
Keep this file free of imports from ddpaudit.reliability so the dual
route stays meaningful.
"""

from __future__ import annotations

from datetime import datetime, timezone


def oracle_date_key(ts: int, granularity: str) -> str:
    if granularity == "second":
        return str(ts)
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    if granularity == "minute":
        return "%04d-%02d-%02dT%02d:%02d" % (dt.year, dt.month, dt.day, dt.hour, dt.minute)
    return "%04d-%02d-%02d" % (dt.year, dt.month, dt.day)


def oracle_jaccard(a, b) -> float:
    """|A n B| / |A u B| by explicit enumeration; both-empty convention 1.0."""
    a = list(a)
    b = list(b)
    if not a and not b:
        return 1.0
    union = []
    for x in a + b:
        if x not in union:
            union.append(x)
    inter = 0
    for x in union:
        if x in a and x in b:
            inter += 1
    return inter / len(union)


def oracle_aspects(log_side, ddp_side, granularity="day"):
    """Jaccard (date, context, overall) from raw tuples.

    log_side: iterable of (timestamp, context_id)
    ddp_side: iterable of (timestamp_or_None, context_key)
    """
    log_dates, log_ctx, log_pairs = [], [], []
    for ts, ctx in log_side:
        d = oracle_date_key(ts, granularity)
        if d not in log_dates:
            log_dates.append(d)
        if ctx not in log_ctx:
            log_ctx.append(ctx)
        if (d, ctx) not in log_pairs:
            log_pairs.append((d, ctx))
    ddp_dates, ddp_ctx, ddp_pairs = [], [], []
    for ts, ctx in ddp_side:
        if ts is not None:
            d = oracle_date_key(ts, granularity)
            if d not in ddp_dates:
                ddp_dates.append(d)
            if ctx and (d, ctx) not in ddp_pairs:
                ddp_pairs.append((d, ctx))
        if ctx and ctx not in ddp_ctx:
            ddp_ctx.append(ctx)
    return (
        oracle_jaccard(log_dates, ddp_dates),
        oracle_jaccard(log_ctx, ddp_ctx),
        oracle_jaccard(log_pairs, ddp_pairs),
    )


def log_tuples(log, kind):
    return [(e.timestamp, e.content_id) for e in log.events if e.kind is kind]


def ddp_tuples(ddp, category_id, context_attr=None):
    out = []
    for rec in ddp.records:
        if rec.category.id != category_id:
            continue
        ctx = rec.attributes.get(context_attr, "") if context_attr else rec.context_id
        out.append((rec.timestamp, ctx))
    return out
