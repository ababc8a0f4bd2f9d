"""A class which bundles an output directory with the CSV artifacts written into it"""

# External imports
import pathlib
import typing
import pandas


class ArtifactHandle:
    """A class to facilitate writing and reading the CSV tables of one run together"""

    def __init__(self, directory: typing.Union[str, pathlib.Path]) -> None:
        self.directory: pathlib.Path = pathlib.Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.paths: typing.Dict[str, pathlib.Path] = {}

    def path(self, name: str) -> pathlib.Path:
        """Location of a named table inside the directory"""
        return self.directory / f"{name}.csv"

    def write(self, name: str, frame: pandas.DataFrame) -> pathlib.Path:
        """
        Writes a table as UTF-8 CSV with a header row and no index
        :param name: Table name, the file stem
        :param frame: The table
        :return: The written path
        """
        path = self.path(name)
        frame.to_csv(path, index=False, encoding="utf-8")
        self.paths[name] = path
        return path

    def read(self, name: str) -> pandas.DataFrame:
        """Reads a table back with exact float parsing"""
        return pandas.read_csv(self.path(name), float_precision="round_trip")

    def contains(self, name: str) -> bool:
        """
        A utility method to test if the directory holds a given table
        :param name: Table name
        :return: True where the CSV file is present, or else False
        """
        return self.path(name).is_file()

    def trial_handle(self, trial_index: int) -> "ArtifactHandle":
        """Handle on the trial_XXX subdirectory holding one trial's traces"""
        return ArtifactHandle(self.directory / f"trial_{trial_index:03d}")

    def has_trial(self, trial_index: int) -> bool:
        """True where the trial's trace subdirectory exists"""
        return (self.directory / f"trial_{trial_index:03d}").is_dir()
