import os

from src.config.paths import DEFAULT_OUTPUT_PATH


class OutputFiles:
    """Construct all output filenames and directories for one configured run."""

    def __init__(self, run_config: object):
        self.run_config = run_config
        self.setup_output_directories()

    def check_folder_exists(self, folder_path: str) -> None:
        """Check if target folder exists, and create if it does not."""
        if not os.path.exists(folder_path):
            os.makedirs(folder_path)

    def setup_output_directories(self):
        """Entrypoint for saving all output files."""
        output_dir = self.run_config.run["output_dir"] or DEFAULT_OUTPUT_PATH
        self.library_path = os.path.join(output_dir, str(self.run_config.run["name"]))
        self.record_path = os.path.join(self.library_path, "records")
        self.trace_path = os.path.join(self.library_path, "traces")
        self.summary_path = os.path.join(self.library_path, "summaries")

        for p in ["library_path", "record_path", "trace_path", "summary_path"]:
            self.check_folder_exists(getattr(self, p))

    def get_record_name(self, algorithm: str, seed: int, fmt: str = "jsonl", compress: bool = False) -> str:
        """records_<algorithm>_seed<k>.{jsonl,jsonl.zst,csv}"""
        if fmt == "jsonl":
            ext = ".jsonl.zst" if compress else ".jsonl"
        elif fmt == "csv":
            ext = ".csv"
        else:
            raise RuntimeError(f"Unknown record format: {fmt}")
        return os.path.join(self.record_path, f"records_{algorithm}_seed{seed}{ext}")

    def get_trace_name(self, algorithm: str, seed: int) -> str:
        return os.path.join(self.trace_path, f"trace_{algorithm}_seed{seed}.jsonl")

    def get_summary_name(self, algorithm: str) -> str:
        return os.path.join(self.summary_path, f"summary_{algorithm}.json")

    def get_comparison_name(self) -> str:
        return os.path.join(self.summary_path, "comparison.csv")
