//! Reference values for χ_q(K), (1, q) surgery on K, in the order
//! χ1(4_1), χ2(4_1), χ3(4_1), χ1(6_1), χ2(6_1), χ3(6_1).

pub const IDS: [&str; 6] = ["chi1_4_1", "chi2_4_1", "chi3_4_1", "chi1_6_1", "chi2_6_1", "chi3_6_1"];

/// a_0..a_3 of Z′ at K = 5.
pub const WRT_K5: [[i64; 4]; 6] = [[1, 4, 4, 1], [6, 8, 5, 1], [1, 2, 3, 1], [-4, -7, -4, -1], [1, 1, 1, 0], [1, -1, 0, 0]];

/// λ_0..λ_11.
pub const LAMBDA: [[&str; 12]; 6] = [
    ["1", "-6", "69", "-1064", "20770", "-492052", "13724452", "-440706098", "16015171303", "-649815778392", "29121224693198", "-1428607184648931"],
    [
        "1",
        "-12",
        "270",
        "-8284",
        "324109",
        "-15440692",
        "867600594",
        "-56182136200",
        "4119997542641",
        "-337497038076594",
        "30545298789501813",
        "-3026955693949081520",
    ],
    [
        "1",
        "-18",
        "603",
        "-27684",
        "1624005",
        "-116107654",
        "9795346273",
        "-952637958170",
        "104938749980019",
        "-12914345285817636",
        "1756098474092255228",
        "-261481531613674066565",
    ],
    [
        "1",
        "-12",
        "246",
        "-6916",
        "248171",
        "-10848488",
        "559466999",
        "-33256127501",
        "2238888918356",
        "-168382708511446",
        "13992172490383855",
        "-1273139103575342212",
    ],
    [
        "1",
        "-24",
        "996",
        "-57200",
        "4207360",
        "-377586960",
        "40010000129",
        "-4889051681203",
        "676832345117585",
        "-104697132728500664",
        "17896885984795441440",
        "-3350210179233727412993",
    ],
    [
        "1",
        "-36",
        "2250",
        "-195060",
        "21677895",
        "-2940578892",
        "471069858664",
        "-87035716226366",
        "18219886814495290",
        "-4262018348304709814",
        "1101770773206971015914",
        "-311911822166530321178763",
    ],
];

/// Coefficients of [Σ_{n≤11} λ_n h^n]^♠ at K = 5.
pub const A_TILDE: [[&str; 4]; 6] = [
    ["-1993867921922235374", "-2540697622186346871", "-1996846249561765121", "-401007308958445124"],
    ["-4192821765514758215994", "-5339478176138672075492", "-4195910356932699813245", "-840880791373767359499"],
    ["-361301312804709430245624", "-460018993992612540674998", "-361478222004980994064372", "-72392944327565893476624"],
    ["-1764664468572475265504", "-2247385397501328211257", "-1766080693688788025254", "-353995059668565997251"],
    ["-4624501555889040993306124", "-5887570615994061037881249", "-4626301765208877840239624", "-926250467309322277387125"],
    ["-429983196405880892355573999", "-547364469010535537295989626", "-430093801055893893139442375", "-86079592745692299905577000"],
];
