ts
obs p
states s0 s1
init s0
label s0 p
label s1 p
edge s0 s1
