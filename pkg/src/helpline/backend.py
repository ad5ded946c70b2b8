"""Mock insurance dataset: policy records, agent contexts, answer rendering."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .nlu import ASSUMED, AgentContext, IntentSchema, QueryFrame, VALID


class NotFoundError(Exception):
    def __init__(self, key: str) -> None:
        super().__init__(f"no record for {key!r}")
        self.key = key


class InvalidFrameError(Exception):
    pass


@dataclass(frozen=True)
class PolicyRecord:
    policy_id: str
    holder: str
    surrender_value: float
    maturity_value: float
    status: str
    address_change_pending: bool


@dataclass(frozen=True)
class AnswerText:
    text: str
    template_id: str
    frame: QueryFrame


# The dataset lives in two flat tab-separated files with a header row;
# see fixtures/policies.tsv and fixtures/agents.tsv for the column sets.

def load_policies(path: str | Path) -> dict[str, PolicyRecord]:
    store: dict[str, PolicyRecord] = {}
    for row in _read_rows(path):
        record = PolicyRecord(
            policy_id=row["policy_id"],
            holder=row["holder"],
            surrender_value=float(row["surrender_value"]),
            maturity_value=float(row["maturity_value"]),
            status=row["status"],
            address_change_pending=row["address_change_pending"].lower() in ("yes", "true", "1"),
        )
        if record.surrender_value < 0 or record.maturity_value < 0:
            raise ValueError(f"negative amount on policy {record.policy_id}")
        store[record.policy_id] = record
    return store


def load_agents(path: str | Path) -> dict[str, AgentContext]:
    agents: dict[str, AgentContext] = {}
    for row in _read_rows(path):
        policies = tuple(p.strip() for p in row["policies"].split(",") if p.strip())
        date = row.get("last_commission_date", "").strip()
        amount = row.get("last_commission_amount", "").strip()
        agents[row["agent_id"]] = AgentContext(
            agent_id=row["agent_id"],
            policies=policies,
            last_commission_date=date or None,
            last_commission_amount=float(amount) if amount else None,
        )
    return agents


def _read_rows(path: str | Path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    rows = [line.split("\t") for line in lines if line.strip() and not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty dataset file")
    header = [col.strip() for col in rows[0]]
    for raw in rows[1:]:
        if len(raw) != len(header):
            raise ValueError(f"{path}: row has {len(raw)} fields, header has {len(header)}")
        yield dict(zip(header, (field.strip() for field in raw)))


def lookup_policy(store: dict[str, PolicyRecord], policy_id: str) -> PolicyRecord:
    try:
        return store[policy_id]
    except KeyError:
        raise NotFoundError(policy_id) from None


TEMPLATES = {
    "surrender_value": "Surrender value of policy {policy_id} is {surrender_value:.2f}.",
    "maturity_value": "Maturity value of policy {policy_id} is {maturity_value:.2f}.",
    "address_change": "Address change for policy {policy_id} is {address_change_status}.",
    "last_commission": "Last commission for agent {agent_id} was paid on {date} amounting to {amount:.2f}.",
}


def answer(
    frame: QueryFrame,
    store: dict[str, PolicyRecord],
    ctx: AgentContext | None = None,
    schema: IntentSchema | None = None,
) -> AnswerText:
    """Render the answer text for a valid (or assumption-completed) frame."""
    if frame.status not in (VALID, ASSUMED):
        raise InvalidFrameError(f"cannot answer a frame with status {frame.status!r}")
    template_id = frame.intent or ""
    if schema is not None and frame.intent in schema.intents:
        template_id = schema.intents[frame.intent].template or template_id
    template = TEMPLATES.get(template_id)
    if template is None:
        raise NotFoundError(template_id)

    fields: dict[str, object] = dict(frame.slots)
    if "policy_id" in frame.slots:
        record = lookup_policy(store, frame.slots["policy_id"])
        fields.update(
            policy_id=record.policy_id,
            holder=record.holder,
            surrender_value=record.surrender_value,
            maturity_value=record.maturity_value,
            status=record.status,
            address_change_status="pending" if record.address_change_pending else "not pending",
        )
    if template_id == "last_commission":
        if ctx is None or ctx.last_commission_date is None or ctx.last_commission_amount is None:
            raise NotFoundError(f"last commission for agent {ctx.agent_id if ctx else '?'}")
        fields.update(
            agent_id=ctx.agent_id,
            date=ctx.last_commission_date,
            amount=ctx.last_commission_amount,
        )

    text = template.format(**fields)
    if frame.status == ASSUMED:
        assumed = ", ".join(f"{slot} {frame.slots[slot]}" for slot in frame.assumed)
        text = f"Assuming {assumed}. {text}"
    return AnswerText(text=text, template_id=template_id, frame=frame)
