"""
Run bookkeeping for the command-line script: report folders, provenance, and run metadata.
"""
import os
import sys
import time
from os.path import join, exists, isdir, abspath
from typing import Dict, Optional

from qspec.errors import InputError

reportFolder = "reports"


def gitCommit() -> Optional[str]:
    """
    :return: The commit of the repository this code runs from and its branch, None outside a git working tree.
    """
    try:
        import git
    except ImportError:
        # GitPython refuses to import without a git executable
        return None
    try:
        repo = git.Repo(search_parent_directories=True)
    except (git.InvalidGitRepositoryError, git.NoSuchPathError):
        return None
    try:
        branch = repo.active_branch.name
    except TypeError:
        # detached head
        branch = "detached"
    return repo.head.object.hexsha + " ({})".format(branch)


def provenance(config: Dict) -> Dict:
    """
    Report header: the resolved configuration and the git commit. Free of timestamps, so identical runs produce
    identical reports.
    """
    return {"config": config, "git_commit": gitCommit()}


class RunFolder(object):
    """
    Output folder of a run, created if missing.
    """

    def __init__(self, path: str = None):
        self.path = path if path is not None else reportFolder
        if not exists(self.path):
            os.makedirs(self.path)
        elif not isdir(self.path):
            raise InputError("Path that should be used as report folder is an existing file: {}".format(self.path))
        self.timestamp = time.time()

    def file(self, name: str) -> str:
        return join(self.path, name)

    def writeReportMetadata(self, scriptRuntime: float = None):
        """
        Append command line, commit, time, and host of the run to run-metadata.md in the folder.
        """
        timeformat = "%d.%m.%Y %H:%M:%S %Z"
        commit = gitCommit()
        lines = {
            "fullCommandLine": " ".join(sys.argv),
            "reportFolder": abspath(self.path),
            "gitCommit": commit if commit is not None else "n/a",
            "currentTime": time.strftime(timeformat),
            "scriptRuntime": "{:.3f} s".format(time.time() - self.timestamp
                                               if scriptRuntime is None else scriptRuntime),
            "host": os.uname().nodename
        }
        with open(join(self.path, "run-metadata.md"), "a") as md:
            md.write("# Report Metadata\n\n")
            md.writelines("{}: {}\n\n".format(k, v) for k, v in lines.items())
