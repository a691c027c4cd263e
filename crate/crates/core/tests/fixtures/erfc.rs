// (x, erfc(x)) from 50-digit arithmetic, rounded to 21 digits.
[
    (-6.0, 1.99999999999999997848),
    (-5.33673, 1.99999999999995555438),
    (-4.67347, 1.9999999999613818479),
    (-4.0102, 1.99999998582648333996),
    (-3.34694, 1.99999779088250152529),
    (-2.68367, 1.99985252457211974887),
    (-2.02041, 1.9957272638446972887),
    (-1.35714, 1.94505182513258026419),
    (-0.693878, 1.67355107468138526742),
    (-0.0306122, 1.03453138187139568836),
    (0.632653, 0.370944028308964429507),
    (1.29592, 0.0668460605561091251783),
    (1.95918, 0.00559361208668940633738),
    (2.62245, 0.000208322492183861935838),
    (3.28571, 0.00000337294237612899449184),
    (3.94898, 2.34102524676250823691e-8),
    (4.61224, 6.90564111609602854411e-11),
    (5.27551, 8.60654511004146876777e-14),
    (5.93878, 4.51436159288953241385e-17),
    (6.60204, 9.93885251887540038104e-21),
    (7.26531, 9.16291236666826821439e-25),
    (7.92857, 3.53285455298938114295e-29),
    (8.59184, 5.68788511407623778942e-34),
    (9.2551, 3.82152098753567086607e-39),
    (9.91837, 1.07026628083388266091e-44),
    (10.5816, 1.24994283482796126228e-50),
    (11.2449, 6.07012259147607977766e-57),
    (11.9082, 1.22696792912102975359e-63),
    (12.5714, 1.03451229313169392169e-70),
    (13.2347, 3.61941194118079918637e-78),
    (13.898, 5.26579456710278278714e-86),
    (14.5612, 3.19434951334436767506e-94),
    (15.2245, 8.0321140061284377814e-103),
    (15.8878, 8.39346997294092000163e-112),
    (16.551, 3.65672081880692249579e-121),
    (17.2143, 6.59780539911278969392e-131),
    (17.8776, 4.94533414407373041787e-141),
    (18.5408, 1.54542121394990913792e-151),
    (19.2041, 1.99868271536496833599e-162),
    (19.8673, 1.07778598567060700832e-173),
    (20.5306, 2.40425892844308518508e-185),
    (21.1939, 2.22704970489826018279e-197),
    (21.8571, 8.60303010170359114811e-210),
    (22.5204, 1.37397023279984776952e-222),
    (23.1837, 9.11019176857578957722e-236),
    (23.8469, 2.51973077293113218582e-249),
    (24.5102, 2.8797127473749330268e-263),
    (25.1735, 1.36618782582987166894e-277),
    (25.8367, 2.70437743576857415252e-292),
    (26.5, 2.21090766426373427593e-307),
]
