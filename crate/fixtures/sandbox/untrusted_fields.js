// outcome: certified
var o = {a: 1, b: 2};
var k = "b";
print(o[k]);
print(o.a + o["b"]);
o[k] = 5;
print(o.b);
