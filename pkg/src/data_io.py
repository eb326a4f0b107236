import os
import json
import hashlib
import logging
from pathlib import Path

import pandas as pd

from src.crystal_datum import CrystalDatum
from src.errors import FormatError
from src.maschke import module_from_document
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

PACKAGE_DATA_DIR = Path(__file__).resolve().parents[1] / "data"


def canonical_json(doc):
    """Key-sorted, whitespace-free JSON; equal documents give equal strings."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def fingerprint(doc):
    """SHA-256 of the canonical JSON of a datum document."""
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


class DataManager:
    """Loads datum and module files and saves reports as JSON plus a CSV of checks."""

    def __init__(self, data_dir=None):
        configured = Path(data_dir or get_settings().data_dir)
        if data_dir is None and not configured.is_dir():
            configured = PACKAGE_DATA_DIR
        self.data_dir = configured
        self.fixture_dir = self.data_dir / "fixtures"

    def resolve(self, name):
        """A file path as given, or a bundled fixture name with or without '.json'."""
        path = Path(name)
        if path.is_file():
            return path
        stem = path.name if path.suffix == ".json" else f"{path.name}.json"
        candidate = self.fixture_dir / stem
        if candidate.is_file():
            return candidate
        raise FormatError(f"No such file or fixture: {name}")

    def load_document(self, name):
        path = self.resolve(name)
        try:
            with open(path, "r", encoding="utf-8") as f:
                doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path} is not valid JSON: {exc}") from exc
        except UnicodeDecodeError as exc:
            raise FormatError(f"{path} is not UTF-8 text: {exc}") from exc
        logger.debug("Loaded %s", path)
        return doc

    def load_datum(self, name):
        doc = self.load_document(name)
        return CrystalDatum.from_document(doc, name=Path(name).stem), doc

    def load_module(self, datum, name):
        return module_from_document(datum, self.load_document(name))

    def list_fixtures(self):
        """One row per bundled fixture: name, kind and a short description."""
        rows = []
        for path in sorted(self.fixture_dir.glob("*.json")):
            with open(path, "r", encoding="utf-8") as f:
                doc = json.load(f)
            if "actions" in doc:
                rows.append({"name": path.stem, "kind": "module", "ring": "", "group_order": "",
                             "rank": doc.get("rank")})
                continue
            datum = CrystalDatum.from_document(doc, name=path.stem)
            rows.append({"name": path.stem, "kind": "datum", "ring": str(datum.ring),
                         "group_order": datum.group.order, "rank": ""})
        return pd.DataFrame(rows, columns=["name", "kind", "ring", "group_order", "rank"])

    def save_report(self, document, checks, out_dir, stem):
        """Write ``stem``.json (the full report) and ``stem``.csv (one row per check)."""
        os.makedirs(out_dir, exist_ok=True)
        json_file = os.path.join(out_dir, f"{stem}.json")
        csv_file = os.path.join(out_dir, f"{stem}.csv")
        self._save_to_json(document, json_file)
        self._save_to_csv(checks, csv_file)
        logger.info("Saved report to %s and %s", json_file, csv_file)
        return json_file, csv_file

    def _save_to_json(self, document, json_file):
        with open(json_file, "w", encoding="utf-8") as f:
            f.write(json.dumps(document, indent=2, sort_keys=True))
            f.write("\n")

    def _save_to_csv(self, checks, csv_file):
        columns = ["name", "passed", "witness", "detail"]
        rows = [{
            "name": c.get("name", ""),
            "passed": c.get("passed", ""),
            "witness": canonical_json(c["witness"]) if c.get("witness") is not None else "",
            "detail": c.get("detail", ""),
        } for c in checks]
        pd.DataFrame(rows, columns=columns).to_csv(csv_file, index=False)
