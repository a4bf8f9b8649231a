#pragma once

// Chebyshev coefficients (variable z = 2p - 1, p = sqrt(t/2pi) - m) for the
// Riemann-Siegel correction functions C_0..C_5. Tables regenerated for this
// project: fitted from high-precision residuals Z(t) - mainsum(t) at
// t = 2*pi*(m+p)^2 over m in [60, 1024], then Chebyshev-projected on 49 Gauss
// nodes. C_0 agrees with the closed form cos(2pi(p^2-p-1/16))/cos(2pi p) to
// full double precision; the C_j tables sit far below the t^{-(2j+3)/4}
// weight they carry in the remainder expansion.

namespace zetamax::rs_tables {

inline constexpr double kChebC0[] = {
    +6.42667286239768321e-01, +9.06304509898086869e-17, +2.71972999997854958e-01,
    +3.62521803959234760e-17, +1.07386058193401669e-02, +1.67666334331146079e-16,
    -1.37438152963376354e-03, +1.81260901979617380e-17, -1.24682218803408019e-04,
    -3.03612010815859127e-16, -5.76459970637973316e-07, +3.39864191211782597e-16,
    +2.72806742737946651e-07, -3.39864191211782597e-16, +8.07795305476298408e-09,
    +5.61908796136813856e-16, -2.08846087815862899e-10, -8.15674058908278194e-17,
    -1.31152141301411066e-11, +1.35945676484713024e-16, -1.44510254103249958e-14,
    +2.44702217672483458e-16, +1.03046822775412488e-14, -9.06304509898086899e-18,
    +1.90323947078598254e-16, -2.90017443167387808e-16, +1.40477199034203464e-16,
    +7.70358833413373918e-17, +1.33679915209967824e-15, -8.38331671655730344e-16,
    +2.08450037276559988e-16, -1.22351108836241729e-16, +5.66440318686304345e-16,
    -4.98467480443947772e-17, -2.17286506248066329e-15, +1.94855469628088693e-16,
    +7.02385995171017320e-17, -2.17513082375540868e-16, +4.55418016223788691e-16,
    -9.19899077546558164e-16, +7.52232743215412134e-16, +6.91057188797291220e-17,
    -1.82393782616989996e-16, +3.90843819893549984e-16, -7.44302578753803901e-16,
    +7.89617804248708202e-16, -5.98727416851423649e-16, +1.12976521561983394e-15};

inline constexpr double kChebC1[] = {
    -2.12415119507364100e-18, +1.06979139210029994e-02, +3.25703183244624982e-18,
    +1.71706512433778824e-02, +4.24830239014728200e-18, +2.79321114978846622e-03,
    +2.83220159343152156e-19, -3.63756537192787315e-05, +5.23957294784831496e-18,
    -2.71089552311474760e-05, +6.93889390390722761e-18, -1.04837498667955473e-06,
    +1.30281273297849993e-17, +5.88646716736064940e-08, +5.66440318686304312e-19,
    +4.32296725783156692e-09, +1.24616870110986943e-17, -1.13695892270110229e-11,
    -7.93016446160826056e-18, -6.69984065392292286e-12, -8.35499470062298930e-18,
    -1.00794656068315733e-13, +2.83220159343152146e-18, +5.16876790801252663e-15};

inline constexpr double kChebC2[] = {
    +3.14611585399095619e-03, +3.59875465595372179e-16, -2.30878388453089819e-03,
    +1.35097786132679473e-15, +5.76982076674427671e-05, +1.14192598121163053e-15,
    +3.52388620237945613e-04, +6.28987720751243587e-16, +2.52466674588398513e-05,
    -1.30007788831484263e-15, -3.44282119801139293e-06, -4.31379705199538631e-17,
    -3.53507456251443190e-07, +1.94116442024802631e-15, +3.73083001611547849e-09,
    +1.60954016554713370e-15, +1.27769673452692784e-09, -2.15617277433937631e-15,
    +2.18791947339439801e-11, -3.18036767556405021e-15, -1.91591506867305520e-12,
    -9.53248251309214441e-16, -6.71370290002449414e-14, +2.34304055041099003e-15,
    +9.25271409944098642e-16, +1.79538126854112853e-15, -4.87448446119503322e-16,
    -3.98411108525999800e-17, -2.21243180380389952e-15, -1.67843346930735558e-16,
    +5.54691107388553226e-16, -2.25974727167416497e-15, -1.02878395286903091e-15,
    +3.23269260000269751e-17, -9.63545959290331841e-16, -1.75260174853534345e-16,
    +7.71947521494689372e-16, +1.80255470413949200e-15, +1.04451816031504008e-15,
    +1.53078504733228351e-15, -1.89242178829357096e-15, -4.34709754729315557e-16,
    -1.73334720301499873e-15, -1.54806922135344794e-15};

inline constexpr double kChebC3[] = {
    -7.95941939479049353e-13, +7.12325620398281963e-05, +4.54629447219192507e-14,
    +2.32343052454319650e-04, -2.38858392302019061e-13, -1.29299120881780534e-04,
    -4.81022498220357700e-13, +1.80744961595190318e-05, -3.49770590714932512e-14,
    +6.52618567209940863e-06, +2.74065654046620897e-13, -1.16963676175032348e-07,
    +2.02367127625802542e-13, -7.34955053491263770e-08, +3.85598073631291006e-14,
    -1.77572211410040981e-09, -5.86698825461411728e-13, +2.56424920793557609e-10,
    -1.73155525468456093e-12, +1.25681620700802185e-11, +7.02914701935114895e-13,
    +2.49277097245585840e-14, +5.97141772280492308e-13, -9.07181472356945514e-13,
    +1.55728559255353565e-13, -6.77588015768040358e-13, +2.44005413105843271e-13,
    +4.28077358141597504e-14, +8.60093664816327169e-13, +7.40959109456320524e-14,
    -2.07266669879962599e-13, +8.80803455257129233e-13, +4.32735553120011612e-13,
    -6.89174936382844071e-15, +3.78481300872385056e-13, +1.03716868568638501e-13,
    -2.94646761306000794e-13, -6.76509142781131308e-13, -4.06960986907633950e-13,
    -5.80885741094687961e-13, +6.87759138443622941e-13, +1.40258563857895840e-13,
    +6.65344954529454939e-13, +5.80095029131308008e-13};

inline constexpr double kChebC4[] = {
    +1.67657617791616866e-04, +4.04310379483542363e-11, -2.27287697373949042e-04,
    +1.09888282588647016e-10, +6.47739255595012047e-05, +8.62405185728479383e-11,
    -8.49210300184788819e-06, +5.41715946021890124e-11, -2.61613692302916423e-06,
    -9.80589711197287867e-11, +8.33625614318342198e-07, +1.01164079168287849e-11,
    +6.32087874599287809e-08, +1.52750427111581453e-10, -1.00640997279332444e-08,
    +1.32078853409919513e-10, -6.62274192949902338e-10, -1.84720948299381958e-10,
    +3.84424533668461198e-10, -2.41133346594505386e-10, -1.45056275464095489e-10,
    -7.35206971595588397e-11, -1.25498987165232891e-10, +1.79574662523782599e-10,
    -3.55505314334548602e-11, +1.37903227927752377e-10, -5.37032667938054946e-11,
    -1.30049562103661194e-11, -1.78316942062585716e-10, -1.70585565617764952e-11,
    +4.17169221931274922e-11, -1.83441111152536180e-10, -9.43560831737227711e-11,
    +5.36143987864993299e-13, -7.95016438803561721e-11, -2.64488203726548894e-11,
    +6.09134763190689104e-11, +1.37481396808674803e-10, +8.50573645232359448e-11,
    +1.18566248490537092e-10, -1.36025928344683883e-10, -2.51407391321954269e-11,
    -1.37543074101321949e-10, -1.17349436254642432e-10, +5.98813095665653701e-11,
    -6.18608852879435428e-11, +6.08530131077148934e-11, +1.04134924865356024e-11,
    +6.09776636559757783e-11};

inline constexpr double kChebC5[] = {
    -1.84174334013631320e-08, +8.82835718903188146e-05, +7.70962598295718523e-10,
    -1.56409652576856735e-05, -6.31133437393482516e-09, -1.92858009469880488e-07,
    -1.07051248912037091e-08, +2.10358006419950862e-06, -1.67206338580467845e-10,
    -6.54961244179170017e-07, +5.22615765627337308e-09, +2.61825337623614199e-08,
    +3.96480442282438053e-09, +1.23855183900751123e-09, +1.48264166460016491e-10,
    -1.53800299598382958e-08, -1.32342516945426763e-08, +2.06655758456213120e-08,
    -3.87532799401586306e-08, +2.63824407600017766e-08, +1.67890175220109448e-08,
    +8.13966210882353584e-09, +1.40843982649623417e-08, -1.97519898423342705e-08,
    +4.15446185222089259e-09, -1.51522415613965362e-08, +6.19575295201383028e-09,
    +1.78350196813329839e-09, +1.98407836001359349e-08, +2.04483304170742047e-09,
    -4.52389027739939687e-09, +2.04938723828494924e-08, +1.08594598073587236e-08,
    +2.30653552568800294e-11, +8.92590043251459847e-09, +3.30278646379838677e-09,
    -6.79255893373859452e-09, -1.51263887040405845e-08, -9.55262825130811271e-09,
    -1.30518794556894165e-08, +1.46477061622415299e-08, +2.52281867241641610e-09,
    +1.52998242896444332e-08, +1.28530045605810429e-08, -6.71147333351728315e-09,
    +6.93079211701597380e-09, -6.50045786715488450e-09, -1.04271366434964196e-09,
    -6.79281172155001327e-09};

} // namespace zetamax::rs_tables
