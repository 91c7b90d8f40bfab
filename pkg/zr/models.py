from sqlalchemy import String
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column

from .experiment import RatioRow


class Base(DeclarativeBase):
    pass


class RatioRows(Base):
    __tablename__ = "ratio_rows"

    id: Mapped[int] = mapped_column(primary_key=True)
    run_id: Mapped[str] = mapped_column(String, nullable=False, index=True)
    seed: Mapped[int]
    dataset: Mapped[str]
    pct: Mapped[float]
    mse_L: Mapped[float | None]
    mse_G: Mapped[float | None]
    mse_segE: Mapped[float | None]
    mse_segE_H: Mapped[float | None]
    mse_OPT: Mapped[float | None]
    mse_ROPT: Mapped[float | None]
    mse_UB: Mapped[float | None]
    error: Mapped[str] = mapped_column(String, default="")

    @classmethod
    def from_dataclass(cls, run_id: str, row: RatioRow) -> RatioRows:
        return cls(
            run_id=run_id,
            seed=row.seed,
            dataset=row.dataset,
            pct=row.pct,
            mse_L=row.mse_L,
            mse_G=row.mse_G,
            mse_segE=row.mse_segE,
            mse_segE_H=row.mse_segE_H,
            mse_OPT=row.mse_OPT,
            mse_ROPT=row.mse_ROPT,
            mse_UB=row.mse_UB,
            error=row.error,
        )

    def to_dataclass(self) -> RatioRow:
        return RatioRow(
            seed=self.seed,
            dataset=self.dataset,
            pct=self.pct,
            mse_L=self.mse_L,
            mse_G=self.mse_G,
            mse_segE=self.mse_segE,
            mse_segE_H=self.mse_segE_H,
            mse_OPT=self.mse_OPT,
            mse_ROPT=self.mse_ROPT,
            mse_UB=self.mse_UB,
            error=self.error or "",
        )
