//! Coverage and rejection frequencies of the reference study (N = 5000 each).
//! Transcribed mechanically; do not edit by hand.

pub struct Reference {
    pub setting: &'static str,
    pub n: usize,
    /// `(coefficient, without bias correction, with bias correction)`.
    pub coverage: &'static [(&'static str, f64, f64)],
    /// `(coefficient, rejection frequency)`.
    pub rejection: &'static [(&'static str, f64)],
}

pub const REFERENCE: [Reference; 10] = [
    Reference {
        setting: "setting1",
        n: 800,
        coverage: &[
            ("rho1", 0.9408, 0.9458),
            ("rho2", 0.9234, 0.9496),
            ("gamma1", 0.9478, 0.9496),
            ("gamma2", 0.9184, 0.9452),
            ("beta1", 0.9404, 0.9424),
            ("beta2", 0.9158, 0.9456),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.7806),
            ("rho3", 0.0292),
            ("rho4", 0.0302),
            ("rho5", 0.0240),
            ("gamma1", 1.0000),
            ("gamma2", 0.7318),
            ("gamma3", 0.0318),
            ("gamma4", 0.0288),
            ("gamma5", 0.0268),
            ("beta1", 1.0000),
            ("beta2", 0.7300),
            ("beta3", 0.0318),
            ("beta4", 0.0288),
            ("beta5", 0.0268),
        ],
    },
    Reference {
        setting: "setting1",
        n: 1600,
        coverage: &[
            ("rho1", 0.9482, 0.9508),
            ("rho2", 0.9400, 0.9530),
            ("gamma1", 0.9476, 0.9500),
            ("gamma2", 0.9258, 0.9446),
            ("beta1", 0.9434, 0.9454),
            ("beta2", 0.9284, 0.9472),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.9744),
            ("rho3", 0.0248),
            ("rho4", 0.0206),
            ("rho5", 0.0236),
            ("gamma1", 1.0000),
            ("gamma2", 0.9488),
            ("gamma3", 0.0254),
            ("gamma4", 0.0280),
            ("gamma5", 0.0220),
            ("beta1", 1.0000),
            ("beta2", 0.9566),
            ("beta3", 0.0240),
            ("beta4", 0.0250),
            ("beta5", 0.0252),
        ],
    },
    Reference {
        setting: "setting2",
        n: 800,
        coverage: &[
            ("rho1", 0.9442, 0.9464),
            ("rho2", 0.9322, 0.9486),
            ("gamma1", 0.9392, 0.9424),
            ("gamma2", 0.8984, 0.9196),
            ("beta1", 0.9396, 0.9432),
            ("beta2", 0.8996, 0.9180),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.7630),
            ("rho3", 0.0384),
            ("rho4", 0.0354),
            ("rho5", 0.0356),
            ("gamma1", 1.0000),
            ("gamma2", 0.5436),
            ("gamma3", 0.0366),
            ("gamma4", 0.0388),
            ("gamma5", 0.0398),
            ("beta1", 1.0000),
            ("beta2", 0.5370),
            ("beta3", 0.0394),
            ("beta4", 0.0344),
            ("beta5", 0.0390),
        ],
    },
    Reference {
        setting: "setting2",
        n: 1600,
        coverage: &[
            ("rho1", 0.9462, 0.9492),
            ("rho2", 0.9418, 0.9516),
            ("gamma1", 0.9444, 0.9458),
            ("gamma2", 0.9256, 0.9442),
            ("beta1", 0.9422, 0.9482),
            ("beta2", 0.9280, 0.9454),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.9674),
            ("rho3", 0.0314),
            ("rho4", 0.0270),
            ("rho5", 0.0292),
            ("gamma1", 1.0000),
            ("gamma2", 0.8210),
            ("gamma3", 0.0346),
            ("gamma4", 0.0342),
            ("gamma5", 0.0302),
            ("beta1", 1.0000),
            ("beta2", 0.8248),
            ("beta3", 0.0338),
            ("beta4", 0.0358),
            ("beta5", 0.0334),
        ],
    },
    Reference {
        setting: "setting3",
        n: 800,
        coverage: &[
            ("rho1", 0.9346, 0.9386),
            ("rho2", 0.9168, 0.9288),
            ("gamma1", 0.9436, 0.9480),
            ("gamma2", 0.9060, 0.9308),
            ("beta1", 0.9418, 0.9434),
            ("beta2", 0.9088, 0.9316),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.5460),
            ("rho3", 0.0438),
            ("rho4", 0.0380),
            ("rho5", 0.0420),
            ("gamma1", 1.0000),
            ("gamma2", 0.6640),
            ("gamma3", 0.0310),
            ("gamma4", 0.0338),
            ("gamma5", 0.0328),
            ("beta1", 1.0000),
            ("beta2", 0.6686),
            ("beta3", 0.0372),
            ("beta4", 0.0316),
            ("beta5", 0.0356),
        ],
    },
    Reference {
        setting: "setting3",
        n: 1600,
        coverage: &[
            ("rho1", 0.9430, 0.9450),
            ("rho2", 0.9306, 0.9442),
            ("gamma1", 0.9438, 0.9452),
            ("gamma2", 0.9270, 0.9456),
            ("beta1", 0.9454, 0.9492),
            ("beta2", 0.9274, 0.9472),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("rho2", 0.7872),
            ("rho3", 0.0406),
            ("rho4", 0.0338),
            ("rho5", 0.0360),
            ("gamma1", 1.0000),
            ("gamma2", 0.9096),
            ("gamma3", 0.0292),
            ("gamma4", 0.0262),
            ("gamma5", 0.0268),
            ("beta1", 1.0000),
            ("beta2", 0.9092),
            ("beta3", 0.0268),
            ("beta4", 0.0324),
            ("beta5", 0.0288),
        ],
    },
    Reference {
        setting: "setting4",
        n: 800,
        coverage: &[
            ("rho1", 0.9442, 0.9438),
            ("gamma1", 0.9392, 0.9410),
            ("gamma2", 0.9456, 0.9492),
            ("gamma3", 0.9422, 0.9434),
            ("gamma4", 0.9462, 0.9532),
            ("gamma5", 0.9352, 0.9442),
            ("gamma6", 0.9094, 0.9450),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("gamma1", 1.0000),
            ("gamma2", 1.0000),
            ("gamma3", 1.0000),
            ("gamma4", 1.0000),
            ("gamma5", 1.0000),
            ("gamma6", 0.7278),
            ("gamma7", 0.0332),
            ("gamma8", 0.0300),
            ("gamma9", 0.0284),
            ("gamma10", 0.0334),
            ("gamma11", 0.0270),
            ("gamma12", 0.0320),
            ("gamma13", 0.0322),
            ("gamma14", 0.0308),
            ("gamma15", 0.0300),
            ("gamma16", 0.0278),
            ("gamma17", 0.0336),
            ("gamma18", 0.0350),
            ("gamma19", 0.0264),
            ("gamma20", 0.0316),
        ],
    },
    Reference {
        setting: "setting4",
        n: 1600,
        coverage: &[
            ("rho1", 0.9454, 0.9460),
            ("gamma1", 0.9464, 0.9474),
            ("gamma2", 0.9412, 0.9428),
            ("gamma3", 0.9470, 0.9474),
            ("gamma4", 0.9428, 0.9450),
            ("gamma5", 0.9400, 0.9434),
            ("gamma6", 0.9248, 0.9454),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("gamma1", 1.0000),
            ("gamma2", 1.0000),
            ("gamma3", 1.0000),
            ("gamma4", 1.0000),
            ("gamma5", 1.0000),
            ("gamma6", 0.9572),
            ("gamma7", 0.0240),
            ("gamma8", 0.0200),
            ("gamma9", 0.0258),
            ("gamma10", 0.0204),
            ("gamma11", 0.0212),
            ("gamma12", 0.0202),
            ("gamma13", 0.0222),
            ("gamma14", 0.0224),
            ("gamma15", 0.0254),
            ("gamma16", 0.0228),
            ("gamma17", 0.0210),
            ("gamma18", 0.0228),
            ("gamma19", 0.0210),
            ("gamma20", 0.0218),
        ],
    },
    Reference {
        setting: "setting5",
        n: 800,
        coverage: &[
            ("rho1", 0.9456, 0.9460),
            ("gamma1", 0.9358, 0.9434),
            ("gamma2", 0.9354, 0.9428),
            ("gamma3", 0.9396, 0.9434),
            ("gamma4", 0.9380, 0.9396),
            ("gamma5", 0.9340, 0.9420),
            ("gamma6", 0.9022, 0.9158),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("gamma1", 1.0000),
            ("gamma2", 1.0000),
            ("gamma3", 1.0000),
            ("gamma4", 1.0000),
            ("gamma5", 0.9808),
            ("gamma6", 0.5286),
            ("gamma7", 0.0290),
            ("gamma8", 0.0348),
            ("gamma9", 0.0338),
            ("gamma10", 0.0284),
            ("gamma11", 0.0344),
            ("gamma12", 0.0284),
            ("gamma13", 0.0328),
            ("gamma14", 0.0322),
            ("gamma15", 0.0348),
            ("gamma16", 0.0290),
            ("gamma17", 0.0292),
            ("gamma18", 0.2882),
            ("gamma19", 0.0306),
            ("gamma20", 0.0286),
        ],
    },
    Reference {
        setting: "setting5",
        n: 1600,
        coverage: &[
            ("rho1", 0.9506, 0.9504),
            ("gamma1", 0.9438, 0.9472),
            ("gamma2", 0.9444, 0.9498),
            ("gamma3", 0.9478, 0.9516),
            ("gamma4", 0.9432, 0.9486),
            ("gamma5", 0.9420, 0.9520),
            ("gamma6", 0.9180, 0.9474),
        ],
        rejection: &[
            ("rho1", 1.0000),
            ("gamma1", 1.0000),
            ("gamma2", 1.0000),
            ("gamma3", 1.0000),
            ("gamma4", 1.0000),
            ("gamma5", 1.0000),
            ("gamma6", 0.8130),
            ("gamma7", 0.0242),
            ("gamma8", 0.0252),
            ("gamma9", 0.0276),
            ("gamma10", 0.0226),
            ("gamma11", 0.0242),
            ("gamma12", 0.0262),
            ("gamma13", 0.0276),
            ("gamma14", 0.0238),
            ("gamma15", 0.0258),
            ("gamma16", 0.0300),
            ("gamma17", 0.0282),
            ("gamma18", 0.0256),
            ("gamma19", 0.0262),
            ("gamma20", 0.0284),
        ],
    },
];
