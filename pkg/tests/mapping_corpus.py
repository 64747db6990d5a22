"""Evaluator conformance corpus.

Each case is (expression, input JSON text, expected compact JSON text).
Expected values are hand-derived from the documented semantics
(docs/mapping-grammar.md): decimal arithmetic at 28 significant digits,
sequence flattening on path steps, singleton collapse, empty-sequence
omission, `=`/`!=` as exact complements, and sequence spreading (only) in
array constructors.
"""

FIG3_INPUT = """{
  "mof_id": "mof-123",
  "reagents": [
    { "role": "metal", "name": "ZrCl4" },
    { "role": "linker", "name": "BDC" },
    { "role": "linker", "name": "DABCO" }
  ]
}"""

FIG3_MAPPING = """{
  "materialId": mof_id,
  "metal": reagents[role = "metal"].name,
  "linkers": reagents[role = "linker"].name
}"""

FIG3_OUTPUT = '{"materialId":"mof-123","metal":"ZrCl4","linkers":["BDC","DABCO"]}'

NUMS = '{"nums":[1,2,3]}'
STORE = (
    '{"items":[{"name":"a","price":10,"category":"x"},'
    '{"name":"b","price":5,"category":"y"},'
    '{"name":"c","price":10,"category":"x"}]}'
)
NESTED = '{"a":[{"b":[1,2]},{"b":[3]}]}'

CORPUS = [
    # --- numeric operators
    ("1 + 2", "{}", "3"),
    ("7 - 10", "{}", "-3"),
    ("6 * 7", "{}", "42"),
    ("7 / 2", "{}", "3.5"),
    ("6 / 3", "{}", "2"),
    ("1 / 3", "{}", "0.3333333333333333333333333333"),
    ("10 % 3", "{}", "1"),
    ("-5 % 3", "{}", "-2"),
    ("0.1 + 0.2", "{}", "0.3"),
    ("2 * 2.5", "{}", "5.0"),
    ("-(3 + 4)", "{}", "-7"),
    ("2 + -3", "{}", "-1"),
    # --- comparison and equality
    ("1 < 2", "{}", "true"),
    ("2 <= 2", "{}", "true"),
    ("3 > 4", "{}", "false"),
    ("3 >= 4", "{}", "false"),
    ('"abc" < "abd"', "{}", "true"),
    ("1 = 1.0", "{}", "true"),
    ('"1" = 1', "{}", "false"),
    ("true != 1", "{}", "true"),
    ("[1,2] = [1,2]", "{}", "true"),
    ('{"a":1,"b":2} = {"b":2,"a":1}', "{}", "true"),
    ("missing = 1", "{}", "false"),
    ("missing != 1", "{}", "true"),
    # --- boolean operators and casts
    ("true and false", "{}", "false"),
    ("true or false", "{}", "true"),
    ("1 < 2 and 2 < 3", "{}", "true"),
    ("$not(true)", "{}", "false"),
    ('$boolean("")', "{}", "false"),
    ('$boolean("x")', "{}", "true"),
    ("$boolean([0,0])", "{}", "false"),
    ("$boolean([0,1])", "{}", "true"),
    ("$exists(missing)", "{}", "false"),
    ("$exists(a)", '{"a":null}', "true"),
    # --- paths and sequences
    ("$", '{"a":1}', '{"a":1}'),
    ("a.b.c", '{"a":{"b":{"c":42}}}', "42"),
    ("a.b", '{"a":[{"b":1},{"b":2}]}', "[1,2]"),
    ("a.b", NESTED, "[1,2,3]"),
    ("a", '{"a":[]}', "[]"),
    ("a", '{"a":[[1,2]]}', "[[1,2]]"),
    ("missing", "{}", "null"),
    ("*", '{"a":1,"b":2}', "[1,2]"),
    ("a.*", '{"a":{"x":1,"y":"s"}}', '[1,"s"]'),
    ("*.name", '{"r":[{"name":"Zr"},{"name":"BD"}]}', '["Zr","BD"]'),
    # --- predicates: index and filter
    ("a[0]", '{"a":[10,20,30]}', "10"),
    ("a[-1]", '{"a":[10,20,30]}', "30"),
    ("a[1].b", '{"a":[{"b":"x"},{"b":"y"}]}', '"y"'),
    ("a[b > 1]", '{"a":[{"b":1},{"b":2},{"b":3}]}', '[{"b":2},{"b":3}]'),
    ("a[b > 1][0]", '{"a":[{"b":1},{"b":2},{"b":3}]}', '{"b":2}'),
    ("a[0]", '{"a":"scalar"}', '"scalar"'),
    ("nums[$ > 1]", NUMS, "[2,3]"),
    ("a.b[0]", NESTED, "[1,3]"),
    ("(a.b)[0]", NESTED, "1"),
    ('reagents[role = "metal"].name', FIG3_INPUT, '"ZrCl4"'),
    ('reagents[role = "linker"].name', FIG3_INPUT, '["BDC","DABCO"]'),
    # --- constructors
    ('{"x": 1, "y": "s"}', "{}", '{"x":1,"y":"s"}'),
    ('{"a": missing}', "{}", "{}"),
    ("[1, 2, 3]", "{}", "[1,2,3]"),
    ("[nums, 99]", NUMS, "[[1,2,3],99]"),
    ('[reagents[role = "linker"].name, "X"]', FIG3_INPUT, '["BDC","DABCO","X"]'),
    ("[1..3]", "{}", "[1,2,3]"),
    ("[1..3, 7]", "{}", "[1,2,3,7]"),
    ("[5..3]", "{}", "[]"),
    ("[1..1]", "{}", "[1]"),
    ('{"n": nums}', NUMS, '{"n":[1,2,3]}'),
    (FIG3_MAPPING, FIG3_INPUT, FIG3_OUTPUT),
    # --- string operators and functions
    ('"a" & "b"', "{}", '"ab"'),
    ("1 & 2", "{}", '"12"'),
    ('"total: " & $sum(nums)', NUMS, '"total: 6"'),
    ('$uppercase("abc")', "{}", '"ABC"'),
    ('$lowercase("AbC")', "{}", '"abc"'),
    ('$trim("  a   b  ")', "{}", '"a b"'),
    ('$substring("hello", 1, 3)', "{}", '"ell"'),
    ('$substring("hello", -2)', "{}", '"lo"'),
    ('$split("a,b,c", ",")', "{}", '["a","b","c"]'),
    ('$split("a,b,c", ",", 2)', "{}", '["a","b"]'),
    ('$join(["a","b"], "-")', "{}", '"a-b"'),
    ('$join($split("a b c", " "))', "{}", '"abc"'),
    ('$contains("hello", "ell")', "{}", "true"),
    ('$replace("a-b-c", "-", "+")', "{}", '"a+b+c"'),
    ('$replace("a-b-c", "-", "+", 1)', "{}", '"a+b-c"'),
    ("$string(5)", "{}", '"5"'),
    ('$string({"a":1})', "{}", '"{\\"a\\":1}"'),
    ('$number("2.5")', "{}", "2.5"),
    ('$number("42")', "{}", "42"),
    ("$number(true)", "{}", "1"),
    # --- aggregation
    ("$sum(nums)", NUMS, "6"),
    ("$sum([])", "{}", "0"),
    ("$max(nums)", NUMS, "3"),
    ("$min(nums)", NUMS, "1"),
    ("$average(nums)", NUMS, "2"),
    ("$average([1,2])", "{}", "1.5"),
    ("$count(nums)", NUMS, "3"),
    ("$count(missing)", "{}", "0"),
    ('$count("x")', "{}", "1"),
    # --- array and object functions
    ("$append([1,2], [3])", "{}", "[1,2,3]"),
    ("$append(1, 2)", "{}", "[1,2]"),
    ("$append(missing, 2)", "{}", "2"),
    ("$distinct([1,2,1,3,2])", "{}", "[1,2,3]"),
    ("$sort([3,1,2])", "{}", "[1,2,3]"),
    ('$sort(["b","a"])', "{}", '["a","b"]'),
    ("$sort(items.price)", STORE, "[5,10,10]"),
    (
        "$sort(items, function($l, $r){ $l.price > $r.price })",
        STORE,
        '[{"name":"b","price":5,"category":"y"},{"name":"a","price":10,"category":"x"},'
        '{"name":"c","price":10,"category":"x"}]',
    ),
    ('$keys({"a":1,"b":2})', "{}", '["a","b"]'),
    ('$keys([{"a":1},{"b":2,"a":3}])', "{}", '["a","b"]'),
    ('$values({"a":1,"b":2})', "{}", "[1,2]"),
    ('$merge([{"a":1},{"b":2},{"a":9}])', "{}", '{"a":9,"b":2}'),
    # --- higher-order functions
    ("$map(nums, function($v){ $v * 2 })", NUMS, "[2,4,6]"),
    ("$map(nums, function($v, $i){ $i })", NUMS, "[0,1,2]"),
    ('$map(["a","b"], $uppercase)', "{}", '["A","B"]'),
    ("$map(nums, function($v){ $v % 2 = 1 ? $v })", NUMS, "[1,3]"),
    ("$filter(nums, function($v){ $v > 1 })", NUMS, "[2,3]"),
    ("$reduce(nums, function($a, $b){ $a + $b })", NUMS, "6"),
    ("$reduce(nums, function($a, $b){ $a + $b }, 10)", NUMS, "16"),
    ("$reduce([], function($a, $b){ $a }, 5)", "{}", "5"),
    (
        '$each({"a":1,"b":2}, function($v, $k){ $k & "=" & $v })',
        "{}",
        '["a=1","b=2"]',
    ),
    # --- grouping (bind + distinct + filter + aggregate)
    (
        "($its := items; $merge($map($distinct($its.category), "
        "function($c){ {$c: $sum($its[category = $c].price)} })))",
        STORE,
        '{"x":20,"y":5}',
    ),
    (
        "($its := items; $distinct($its.category))",
        STORE,
        '["x","y"]',
    ),
    # --- blocks, binds, conditionals, lambdas
    ("($x := 5; $x * 2)", "{}", "10"),
    ("($x := 2; $y := 3; $x + $y)", "{}", "5"),
    ("(1; 2; 3)", "{}", "3"),
    ('true ? "yes" : "no"', "{}", '"yes"'),
    ('false ? "yes"', "{}", "null"),
    ('a = "yes" ? true : false', '{"a":"yes"}', "true"),
    ('a = "yes" ? true : false', '{"a":"no"}', "false"),
    ("($f := function($x){ $x + 1 }; $f(41))", "{}", "42"),
    ("($inc := function($n){ $n + 1 }; $map(nums, $inc))", NUMS, "[2,3,4]"),
    (
        "($fact := function($n){ $n <= 1 ? 1 : $n * $fact($n - 1) }; $fact(5))",
        "{}",
        "120",
    ),
    ("function($x){ $x * $x }(9)", "{}", "81"),
    # --- membership and ranges
    ("2 in nums", NUMS, "true"),
    ("5 in nums", NUMS, "false"),
    ('"a" in "a"', "{}", "true"),
    ("x in [1..3]", '{"x":2}', "true"),
    # --- misc
    ("/* doc */ 1 + /* inline */ 2", "{}", "3"),
    ("$count($)", "[1,2,3]", "3"),
    (
        '{"r": {"names": [reagents.name], "count": $count(reagents)}}',
        FIG3_INPUT,
        '{"r":{"names":["ZrCl4","BDC","DABCO"],"count":3}}',
    ),
    ('`weird name`', '{"weird name":7}', "7"),
]
