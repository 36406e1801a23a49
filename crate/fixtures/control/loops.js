// outcome: value
var s = 0;
for (var i = 0; i < 5; i++) { if (i == 3) continue; s += i }
print(s);
var n = 0;
while (true) { n++; if (n > 4) break }
print(n);
var d = 0;
do { d = d + 1 } while (d < 0);
print(d);
outer: for (var a = 0; a < 3; a++) {
  for (var b = 0; b < 3; b++) {
    if (b == 1) continue outer;
    if (a == 2) break outer;
    print(a + ":" + b) } }
