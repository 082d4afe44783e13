from equiscope.evidence import parse_git_numstat

HEADER = "@@@a1b2c3d|Alice Dev|2026-01-06T10:00:00+00:00|add parser"


def test_sums_numstat_over_files():
    stream = HEADER + "\n10\t2\ta.rs\n3\t0\tb.md\n"
    commits, issues = parse_git_numstat(stream)
    assert not issues
    assert len(commits) == 1
    assert commits[0].lines_added == 13
    assert commits[0].lines_deleted == 2
    assert commits[0].files == ["a.rs", "b.md"]
    assert commits[0].author_alias == "Alice Dev"
    assert commits[0].message == "add parser"


def test_binary_numstat_counts_zero():
    stream = HEADER + "\n-\t-\timage.png\n"
    commits, _ = parse_git_numstat(stream)
    assert commits[0].lines_added == 0
    assert commits[0].lines_deleted == 0
    assert commits[0].files == ["image.png"]


def test_empty_stream():
    commits, issues = parse_git_numstat("")
    assert commits == []
    assert issues == []


def test_malformed_header_recorded_with_line_number_and_parsing_continues():
    stream = "\n".join([
        "@@@broken-header-no-pipes",
        HEADER,
        "5\t1\tx.py",
    ])
    commits, issues = parse_git_numstat(stream)
    assert len(commits) == 1
    assert commits[0].lines_added == 5
    assert len(issues) == 1
    assert issues[0].line == 1
    assert "header" in issues[0].message


def test_subject_may_contain_pipes():
    stream = "@@@deadbee|Bob|2026-01-07T09:30:00+01:00|fix a|b|c\n1\t1\tz.txt\n"
    commits, issues = parse_git_numstat(stream)
    assert not issues
    assert commits[0].message == "fix a|b|c"
    assert commits[0].offset_min == 60


def test_numstat_before_header_is_an_issue():
    commits, issues = parse_git_numstat("3\t1\torphan.py\n")
    assert commits == []
    assert len(issues) == 1


def test_unparseable_date_is_an_issue():
    commits, issues = parse_git_numstat("@@@abc|Ann|yesterday|msg\n")
    assert commits == []
    assert issues and "date" in issues[0].message
