"""Saving and loading JSON run reports."""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict

from lib.report import REQUIRED_KEYS, Report

REPORT_VERSION = "1.0"


class ReportManager:
    """Writes reports as versioned JSON files and reads them back with validation."""

    def save_report(self, report: Report, path: str) -> str:
        """Write a report to a JSON file.

        Args:
            report: The report to write
            path: Destination file; parent directories are created

        Returns:
            Success message with the report location

        Raises:
            ValueError: If path is empty
            OSError: If unable to write the file
        """
        if not path or not path.strip():
            raise ValueError("Report path cannot be empty")

        document: Dict[str, Any] = {
            "version": REPORT_VERSION,
            "timestamp": datetime.now().isoformat(),
        }
        document.update(report.to_dict())

        report_path = Path(path)
        try:
            report_path.parent.mkdir(parents=True, exist_ok=True)
            with open(report_path, "w") as f:
                json.dump(document, f, indent=2)
                f.write("\n")
            return f"Report written to {report_path}"
        except OSError as e:
            raise OSError(f"Failed to write report: {e}")

    def load_report(self, path: str) -> Report:
        """Load and validate a report written by save_report.

        Args:
            path: Report file

        Returns:
            The stored Report

        Raises:
            FileNotFoundError: If the file doesn't exist
            ValueError: If the file is corrupted, incomplete or inconsistent
        """
        report_path = Path(path)
        if not report_path.exists():
            raise FileNotFoundError(f"Report file '{path}' not found")

        try:
            with open(report_path, "r") as f:
                document = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Corrupted report file: {e}")

        if not isinstance(document, dict):
            raise ValueError("Invalid report file format")

        if "version" not in document:
            raise ValueError("Report file missing version information")

        version = document["version"]
        if version != REPORT_VERSION:
            raise ValueError(f"Incompatible report version: {version}")

        missing = [key for key in REQUIRED_KEYS if key not in document]
        if missing:
            raise ValueError(f"Report file missing keys: {', '.join(missing)}")

        try:
            report = Report.from_dict(document)
        except (KeyError, TypeError) as e:
            raise ValueError(f"Failed to load report data: {e}")

        is_valid, error = report.validate()
        if not is_valid:
            raise ValueError(f"Inconsistent report: {error}")
        return report
