from collections.abc import Iterable

from sqlalchemy import create_engine, delete, select
from sqlalchemy.orm import Session, sessionmaker

from .experiment import RatioRow
from .models import Base, RatioRows


def create_engine_and_session(db_path: str) -> sessionmaker[Session]:
    """Database is created automatically when the engine/session is created."""
    engine = create_engine(f"sqlite:///{db_path}", future=True)
    Base.metadata.create_all(engine)
    return sessionmaker(engine, expire_on_commit=False)


def insert_rows(session: Session, run_id: str, rows: Iterable[RatioRow]) -> int:
    """Store experiment rows under a run label.

    Args:
        session: Active SQLAlchemy session.
        run_id: Label of the experiment run.
        rows: Rows to store.
    Returns:
        Number of stored rows.
    """
    records = [RatioRows.from_dataclass(run_id, row) for row in rows]
    session.add_all(records)
    session.commit()
    return len(records)


def get_rows(
    session: Session,
    run_id: str | None = None,
    dataset: str | None = None,
    pct: float | None = None,
) -> list[RatioRow]:
    """Retrieve stored rows matching every given filter.

    Args:
        session: Active SQLAlchemy session.
        run_id: Optional run label.
        dataset: Optional exact dataset label.
        pct: Optional poisoning percentage.
    Returns:
        Matching rows ordered by dataset, seed and percentage.
    """
    stmt = select(RatioRows)

    if run_id is not None:
        stmt = stmt.where(RatioRows.run_id == run_id)
    if dataset is not None:
        stmt = stmt.where(RatioRows.dataset == dataset)
    if pct is not None:
        stmt = stmt.where(RatioRows.pct == pct)

    stmt = stmt.order_by(RatioRows.dataset, RatioRows.seed, RatioRows.pct, RatioRows.id)
    return [r.to_dataclass() for r in session.scalars(stmt)]


def get_run_ids(session: Session) -> list[str]:
    return list(session.scalars(select(RatioRows.run_id).distinct().order_by(RatioRows.run_id)))


def delete_run(session: Session, run_id: str) -> int:
    """Delete every row of a run and return how many were removed."""
    result = session.execute(delete(RatioRows).where(RatioRows.run_id == run_id))
    session.commit()
    return result.rowcount
