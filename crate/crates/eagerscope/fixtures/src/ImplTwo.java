public class ImplTwo extends Base {

    public ImplTwo() {
    }
}
